//! Complex algebras of frames, prime structures of finite HAOs, and isomorphism checking.

mod iso;

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{check_fsa, single, tense_adjoints, AlgebraError, Elem, Hao, TableAlgebra};
use crate::relational::{
    check_ik_frame, coproduct_frame, restrict_frame, Frame, ModelKind, Relation, RelationalError,
};
use crate::syntax::Agent;

pub use iso::{algebra_isomorphism, find_isomorphism, frame_isomorphism, verify_witness, IsoWitness, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("not an IK-frame: {0}")]
    InvalidFrame(String),
    #[error("not a Fischer Servi algebra: {0}")]
    NotFsa(String),
    #[error("structures have different signatures: [{0}] vs [{1}]")]
    SignatureMismatch(String, String),
    #[error("frame has {0} worlds; complex algebras are built for at most {MAX_COMPLEX_WORLDS}")]
    TooLarge(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Relational(#[from] RelationalError),
}

/// Largest frame whose complex algebra will be built.
pub const MAX_COMPLEX_WORLDS: usize = 24;

/// `F⁺` together with the downset behind each element.
#[derive(Clone, Debug)]
pub struct ComplexAlgebra {
    pub algebra: TableAlgebra,
    sets: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, u32>,
}

impl ComplexAlgebra {
    pub fn set(&self, x: u32) -> &FixedBitSet {
        &self.sets[x as usize]
    }

    pub fn element(&self, set: &FixedBitSet) -> Option<u32> {
        self.index.get(set).copied()
    }

    pub fn elem(&self, set: &FixedBitSet) -> Option<Elem> {
        self.element(set).map(single)
    }
}

/// All downsets of the frame order, ordered by size and then bit pattern.
pub fn downsets(frame: &Frame) -> Vec<FixedBitSet> {
    let n = frame.len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![FixedBitSet::with_capacity(n)];
    let mut out = Vec::new();
    while let Some(s) = stack.pop() {
        if !seen.insert(s.ones().collect()) {
            continue;
        }
        for w in 0..n {
            if !s.contains(w) && frame.below(w).ones().all(|z| z == w || s.contains(z)) {
                let mut t = s.clone();
                t.insert(w);
                stack.push(t);
            }
        }
        out.push(s);
    }
    out.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
    out
}

#[derive(Debug)]
struct Downsets<'f> {
    frame: &'f Frame,
    sets: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, u32>,
}

impl Downsets<'_> {
    fn s(&self, x: &[u32]) -> &FixedBitSet {
        &self.sets[x[0] as usize]
    }

    fn e(&self, s: FixedBitSet) -> Elem {
        single(self.index[&s])
    }
}

impl Hao for Downsets<'_> {
    fn agents(&self) -> &[Agent] {
        self.frame.agents()
    }
    fn width(&self) -> usize {
        1
    }
    fn bot(&self) -> Elem {
        self.e(self.frame.empty_set())
    }
    fn top(&self) -> Elem {
        self.e(self.frame.full_set())
    }
    fn leq(&self, x: &[u32], y: &[u32]) -> bool {
        self.s(x).is_subset(self.s(y))
    }
    fn meet(&self, x: &[u32], y: &[u32]) -> Elem {
        let mut s = self.s(x).clone();
        s.intersect_with(self.s(y));
        self.e(s)
    }
    fn join(&self, x: &[u32], y: &[u32]) -> Elem {
        let mut s = self.s(x).clone();
        s.union_with(self.s(y));
        self.e(s)
    }
    fn imp(&self, x: &[u32], y: &[u32]) -> Elem {
        self.e(self.frame.downset_imp(self.s(x), self.s(y)))
    }
    fn dia(&self, agent: usize, x: &[u32]) -> Elem {
        self.e(self.frame.dia(agent, self.s(x)))
    }
    fn boxed(&self, agent: usize, x: &[u32]) -> Elem {
        self.e(self.frame.boxed(agent, self.s(x)))
    }
    fn elements(&self) -> Vec<Elem> {
        (0..self.sets.len() as u32).map(single).collect()
    }
    fn size(&self) -> Option<usize> {
        Some(self.sets.len())
    }
    fn label(&self, x: &[u32]) -> String {
        format!("{{{}}}", self.frame.set_names(self.s(x)).join(","))
    }
    fn contains(&self, x: &[u32]) -> bool {
        x.len() == 1 && (x[0] as usize) < self.sets.len()
    }
}

/// `F⁺`: downsets with `∩`, `∪`, `⇒`, `⟨R⟩` and `[≥∘R]`.
pub fn complex_algebra(frame: &Frame) -> Result<ComplexAlgebra, DualityError> {
    let report = check_ik_frame(frame, ModelKind::Ik);
    if let Some(v) = report.violations.first() {
        return Err(DualityError::InvalidFrame(v.to_string()));
    }
    if frame.len() > MAX_COMPLEX_WORLDS {
        return Err(DualityError::TooLarge(frame.len()));
    }
    let sets = downsets(frame);
    let index: HashMap<FixedBitSet, u32> = sets.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let d = Downsets { frame, sets, index };
    let (algebra, _) = TableAlgebra::materialize(&d)?;
    Ok(ComplexAlgebra { algebra, sets: d.sets, index: d.index })
}

/// `x` is completely join-prime iff `x ≰ ⋁{y | x ≰ y}`.
pub fn is_join_prime(t: &TableAlgebra, x: u32) -> bool {
    !t.le(x, kappa(t, x))
}

/// `y` is completely meet-prime iff `⋀{x | x ≰ y} ≰ y`.
pub fn is_meet_prime(t: &TableAlgebra, y: u32) -> bool {
    let l = t.lattice();
    let m = (0..t.len() as u32).filter(|&x| !t.le(x, y)).fold(l.top(), |acc, x| t.m(acc, x));
    !t.le(m, y)
}

/// `J∞(A)`.
pub fn join_primes(t: &TableAlgebra) -> Vec<u32> {
    (0..t.len() as u32).filter(|&x| is_join_prime(t, x)).collect()
}

/// `M∞(A)`.
pub fn meet_primes(t: &TableAlgebra) -> Vec<u32> {
    (0..t.len() as u32).filter(|&y| is_meet_prime(t, y)).collect()
}

/// `κ(x) = ⋁{x′ | x′ ≰ x}`.
pub fn kappa(t: &TableAlgebra, x: u32) -> u32 {
    let l = t.lattice();
    (0..t.len() as u32).filter(|&y| !t.le(x, y)).fold(l.bot(), |acc, y| t.j(acc, y))
}

/// `λ(y) = ⋀{y′ | y ≰ y′}`.
pub fn lambda(t: &TableAlgebra, y: u32) -> u32 {
    let l = t.lattice();
    (0..t.len() as u32).filter(|&x| !t.le(x, y)).fold(l.top(), |acc, x| t.m(acc, x))
}

/// `A₊`: join-primes of `A` with the restricted order and `x R y ⟺ x ≤ ◇y ∧ y ≤ ◆x`.
#[derive(Clone, Debug)]
pub struct PrimeStructure {
    pub frame: Frame,
    pub primes: Vec<u32>,
}

pub fn prime_structure(t: &TableAlgebra) -> Result<PrimeStructure, DualityError> {
    let report = check_fsa(t, false);
    if !report.holds() {
        return Err(DualityError::NotFsa(report.failures().join("; ")));
    }
    let tt = if t.has_tense() { t.clone() } else { tense_adjoints(t)? };
    let primes = join_primes(&tt);
    let n = primes.len();
    let order = Relation::from_pairs(
        n,
        (0..n).cartesian_product(0..n).filter(|&(i, j)| tt.le(primes[i], primes[j])),
    );
    let rel = (0..tt.agents().len())
        .map(|a| {
            Relation::from_pairs(
                n,
                (0..n).cartesian_product(0..n).filter(|&(i, j)| {
                    let (x, y) = (primes[i], primes[j]);
                    tt.le(x, tt.d(a, y)) && tt.le(y, tt.bd(a, x))
                }),
            )
        })
        .collect();
    let names = primes.iter().map(|&p| tt.name(p).to_string()).collect();
    let frame = Frame::new(names, order, tt.agents().to_vec(), rel)?;
    Ok(PrimeStructure { frame, primes })
}

/// `F^a`: the subframe of `∐_K F` on pairs `(w,j)` with `w ∈ pre[j]`.
pub fn update_frame(
    frame: &Frame,
    states: &[String],
    succ: &[Vec<Vec<usize>>],
    pre: &[FixedBitSet],
) -> Result<Frame, DualityError> {
    let n = frame.len();
    let co = coproduct_frame(frame, states, succ)?;
    let keep: Vec<usize> = (0..states.len()).flat_map(|j| pre[j].ones().map(move |w| j * n + w)).collect();
    Ok(restrict_frame(&co, &keep)?)
}
