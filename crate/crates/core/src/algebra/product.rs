use std::sync::Arc;

use itertools::Itertools;

use super::{AlgebraError, Elem, Hao};
use crate::syntax::{ActionStructure, Agent};

/// An action structure whose preconditions are elements of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraAction {
    pub name: String,
    pub states: Vec<String>,
    pub designated: usize,
    /// `succ[agent][j]`: α-successors of `j`, agents indexed as in the algebra.
    pub succ: Vec<Vec<Vec<usize>>>,
    pub pre: Vec<Elem>,
}

impl AlgebraAction {
    /// Takes the relations of `action` for the algebra's agents, with the given preconditions.
    pub fn new(alg: &dyn Hao, action: &ActionStructure, pre: Vec<Elem>) -> Result<Self, AlgebraError> {
        let k = action.len();
        let succ = alg
            .agents()
            .iter()
            .map(|a| {
                (0..k)
                    .map(|j| action.succ(a, j).map(<[usize]>::to_vec))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| AlgebraError::MissingActionRelation {
                        action: action.name().to_string(),
                        agent: a.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        AlgebraAction::from_parts(action.name(), action.states().to_vec(), action.designated(), succ, pre)
    }

    pub fn from_parts(
        name: &str,
        states: Vec<String>,
        designated: usize,
        succ: Vec<Vec<Vec<usize>>>,
        pre: Vec<Elem>,
    ) -> Result<Self, AlgebraError> {
        let k = states.len();
        if k == 0 || designated >= k || pre.len() != k || succ.iter().any(|s| s.len() != k) {
            return Err(AlgebraError::Invalid(format!("malformed action `{name}`")));
        }
        Ok(AlgebraAction { name: name.to_string(), states, designated, succ, pre })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `i α_agent j`.
    pub fn has_edge(&self, agent: usize, i: usize, j: usize) -> bool {
        self.succ[agent][i].contains(&j)
    }
}

/// The `|K|`-fold power `∏ₐ𝔸` with the modal operators induced by the action relations.
#[derive(Clone, Debug)]
pub struct ProductAlgebra {
    base: Arc<dyn Hao>,
    w: usize,
    k: usize,
    states: Vec<String>,
    succ: Vec<Vec<Vec<usize>>>,
    pred: Vec<Vec<Vec<usize>>>,
    pre: Elem,
}

/// `∏ₐ𝔸`.
pub fn product_algebra(base: Arc<dyn Hao>, action: &AlgebraAction) -> ProductAlgebra {
    let k = action.len();
    let pred = action
        .succ
        .iter()
        .map(|s| (0..k).map(|j| (0..k).filter(|&i| s[i].contains(&j)).collect()).collect())
        .collect();
    let pre = action.pre.iter().flat_map(|e| e.iter().copied()).collect();
    ProductAlgebra { w: base.width(), k, states: action.states.clone(), succ: action.succ.clone(), pred, pre, base }
}

impl ProductAlgebra {
    pub fn base(&self) -> &Arc<dyn Hao> {
        &self.base
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// `Pre_a` as a product element.
    pub fn pre(&self) -> &Elem {
        &self.pre
    }

    /// Coordinate `j` of `f`.
    pub fn coord<'x>(&self, f: &'x [u32], j: usize) -> &'x [u32] {
        &f[j * self.w..(j + 1) * self.w]
    }

    /// The constant map with value `x`.
    pub fn constant(&self, x: &[u32]) -> Elem {
        (0..self.k).flat_map(|_| x.iter().copied()).collect()
    }

    /// Builds an element from its coordinates.
    pub fn tuple(&self, coords: &[Elem]) -> Elem {
        coords.iter().flat_map(|c| c.iter().copied()).collect()
    }

    fn pointwise(&self, x: &[u32], y: &[u32], op: impl Fn(&[u32], &[u32]) -> Elem) -> Elem {
        let mut out = Elem::with_capacity(x.len());
        for j in 0..self.k {
            out.extend_from_slice(&op(self.coord(x, j), self.coord(y, j)));
        }
        out
    }

    fn modal(
        &self,
        rel: &[Vec<usize>],
        f: &[u32],
        unit: Elem,
        op: impl Fn(&[u32]) -> Elem,
        combine: impl Fn(&[u32], &[u32]) -> Elem,
    ) -> Elem {
        let mut out = Elem::with_capacity(f.len());
        for targets in rel {
            let v = targets.iter().fold(unit.clone(), |acc, &i| combine(&acc, &op(self.coord(f, i))));
            out.extend_from_slice(&v);
        }
        out
    }
}

impl Hao for ProductAlgebra {
    fn agents(&self) -> &[Agent] {
        self.base.agents()
    }

    fn width(&self) -> usize {
        self.w * self.k
    }

    fn bot(&self) -> Elem {
        self.constant(&self.base.bot())
    }

    fn top(&self) -> Elem {
        self.constant(&self.base.top())
    }

    fn leq(&self, x: &[u32], y: &[u32]) -> bool {
        (0..self.k).all(|j| self.base.leq(self.coord(x, j), self.coord(y, j)))
    }

    fn meet(&self, x: &[u32], y: &[u32]) -> Elem {
        self.pointwise(x, y, |a, b| self.base.meet(a, b))
    }

    fn join(&self, x: &[u32], y: &[u32]) -> Elem {
        self.pointwise(x, y, |a, b| self.base.join(a, b))
    }

    fn imp(&self, x: &[u32], y: &[u32]) -> Elem {
        self.pointwise(x, y, |a, b| self.base.imp(a, b))
    }

    fn dia(&self, agent: usize, f: &[u32]) -> Elem {
        let b = &self.base;
        self.modal(&self.succ[agent], f, b.bot(), |x| b.dia(agent, x), |x, y| b.join(x, y))
    }

    fn boxed(&self, agent: usize, f: &[u32]) -> Elem {
        let b = &self.base;
        self.modal(&self.succ[agent], f, b.top(), |x| b.boxed(agent, x), |x, y| b.meet(x, y))
    }

    fn black_dia(&self, agent: usize, f: &[u32]) -> Elem {
        let b = &self.base;
        self.modal(&self.pred[agent], f, b.bot(), |x| b.black_dia(agent, x), |x, y| b.join(x, y))
    }

    fn black_box(&self, agent: usize, f: &[u32]) -> Elem {
        let b = &self.base;
        self.modal(&self.pred[agent], f, b.top(), |x| b.black_box(agent, x), |x, y| b.meet(x, y))
    }

    fn elements(&self) -> Vec<Elem> {
        let base = self.base.elements();
        (0..self.k)
            .map(|_| base.iter())
            .multi_cartesian_product()
            .map(|cs| cs.into_iter().flat_map(|e| e.iter().copied()).collect())
            .collect()
    }

    fn size(&self) -> Option<usize> {
        self.base.size()?.checked_pow(self.k as u32)
    }

    fn label(&self, f: &[u32]) -> String {
        let parts = (0..self.k).map(|j| self.base.label(self.coord(f, j))).join(",");
        format!("({parts})")
    }

    fn contains(&self, f: &[u32]) -> bool {
        f.len() == self.w * self.k && (0..self.k).all(|j| self.base.contains(self.coord(f, j)))
    }
}

/// `𝔸ᵃ`: the quotient of `∏ₐ𝔸` by `f ≡ g ⟺ f∧Pre = g∧Pre`, carried by the
/// representatives below `Pre`.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    product: ProductAlgebra,
}

/// `𝔸ᵃ`.
pub fn quotient_algebra(product: ProductAlgebra) -> QuotientAlgebra {
    QuotientAlgebra { product }
}

impl QuotientAlgebra {
    pub fn product(&self) -> &ProductAlgebra {
        &self.product
    }

    pub fn pre(&self) -> &Elem {
        &self.product.pre
    }
}

/// `i′([b]) = b∧Pre`.
pub fn i_prime(q: &QuotientAlgebra, c: &[u32]) -> Elem {
    q.product.meet(c, &q.product.pre)
}

/// `π(f) = [f]`, returned as its representative `f∧Pre`.
pub fn pi(q: &QuotientAlgebra, f: &[u32]) -> Elem {
    q.product.meet(f, &q.product.pre)
}

/// `π_k(f) = f(k)`.
pub fn pi_k(p: &ProductAlgebra, f: &[u32], k: usize) -> Elem {
    p.coord(f, k).iter().copied().collect()
}

impl Hao for QuotientAlgebra {
    fn agents(&self) -> &[Agent] {
        self.product.agents()
    }

    fn width(&self) -> usize {
        self.product.width()
    }

    fn bot(&self) -> Elem {
        self.product.bot()
    }

    fn top(&self) -> Elem {
        self.product.pre.clone()
    }

    fn leq(&self, x: &[u32], y: &[u32]) -> bool {
        self.product.leq(x, y)
    }

    fn meet(&self, x: &[u32], y: &[u32]) -> Elem {
        self.product.meet(x, y)
    }

    fn join(&self, x: &[u32], y: &[u32]) -> Elem {
        self.product.join(x, y)
    }

    fn imp(&self, x: &[u32], y: &[u32]) -> Elem {
        let p = &self.product;
        p.meet(&p.pre, &p.imp(x, y))
    }

    fn dia(&self, agent: usize, x: &[u32]) -> Elem {
        let p = &self.product;
        p.meet(&p.pre, &p.dia(agent, &p.meet(x, &p.pre)))
    }

    fn boxed(&self, agent: usize, x: &[u32]) -> Elem {
        let p = &self.product;
        p.meet(&p.pre, &p.boxed(agent, &p.imp(&p.pre, x)))
    }

    fn black_dia(&self, agent: usize, x: &[u32]) -> Elem {
        let p = &self.product;
        p.meet(&p.pre, &p.black_dia(agent, &p.meet(x, &p.pre)))
    }

    fn black_box(&self, agent: usize, x: &[u32]) -> Elem {
        let p = &self.product;
        p.meet(&p.pre, &p.black_box(agent, &p.imp(&p.pre, x)))
    }

    fn elements(&self) -> Vec<Elem> {
        let p = &self.product;
        let base = p.base.elements();
        let per: Vec<Vec<&Elem>> = (0..p.k)
            .map(|j| base.iter().filter(|e| p.base.leq(e, p.coord(&p.pre, j))).collect())
            .collect();
        per.into_iter()
            .multi_cartesian_product()
            .map(|cs| cs.into_iter().flat_map(|e| e.iter().copied()).collect())
            .collect()
    }

    fn size(&self) -> Option<usize> {
        let p = &self.product;
        let base = p.base.elements();
        (0..p.k).try_fold(1usize, |acc, j| {
            acc.checked_mul(base.iter().filter(|e| p.base.leq(e, p.coord(&p.pre, j))).count())
        })
    }

    fn label(&self, x: &[u32]) -> String {
        self.product.label(x)
    }

    fn contains(&self, x: &[u32]) -> bool {
        self.product.contains(x) && self.product.leq(x, &self.product.pre)
    }
}
