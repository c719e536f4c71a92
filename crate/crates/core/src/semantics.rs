//! Algebraic models, their updates, and the algebraic extension map.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{i_prime, pi, pi_k, product_algebra, quotient_algebra, AlgebraAction, AlgebraError, Elem, Hao};
use crate::algebra::{ProductAlgebra, QuotientAlgebra};
use crate::duality::{complex_algebra, ComplexAlgebra, DualityError};
use crate::relational::Model;
use crate::syntax::{ActionStructure, Agent, Env, Formula, SyntaxError};

/// Largest number of valuations [`validity`] will scan.
pub const MAX_VALUATIONS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error("atom `{0}` has no value")]
    UnknownAtom(String),
    #[error("agent `{0}` is not an agent of the algebra")]
    UnknownAgent(String),
    #[error("`{0}` is not an element of the algebra")]
    NotAnElement(String),
    #[error("{count} valuations exceed the cap of {cap}")]
    TooManyValuations { count: String, cap: u128 },
}

/// An algebra with a valuation of atoms.
#[derive(Clone, Debug)]
pub struct AlgebraicModel {
    pub algebra: Arc<dyn Hao>,
    pub val: BTreeMap<String, Elem>,
}

impl AlgebraicModel {
    pub fn new(algebra: Arc<dyn Hao>, val: BTreeMap<String, Elem>) -> Result<Self, SemanticsError> {
        if let Some((p, _)) = val.iter().find(|(_, x)| !algebra.contains(x)) {
            return Err(SemanticsError::NotAnElement(format!("value of {p}")));
        }
        Ok(AlgebraicModel { algebra, val })
    }

    /// `(F⁺, V)` for a relational model; classical models are read as discrete IK models.
    pub fn from_model(model: &Model) -> Result<(AlgebraicModel, ComplexAlgebra), SemanticsError> {
        let c = complex_algebra(model.frame())?;
        let val = model
            .valuation()
            .iter()
            .map(|(p, s)| (p.clone(), c.elem(s).expect("valuations are downsets")))
            .collect();
        let alg: Arc<dyn Hao> = Arc::new(c.algebra.clone());
        Ok((AlgebraicModel { algebra: alg, val }, c))
    }
}

/// `M^α` with the intermediate algebras that produced it.
#[derive(Clone, Debug)]
pub struct UpdatedAlgebraicModel {
    pub action: AlgebraAction,
    pub product: ProductAlgebra,
    pub quotient: Arc<QuotientAlgebra>,
    /// `(𝔸ᵃ, V^α)` with `V^α = π∘∏_αV`.
    pub model: AlgebraicModel,
}

impl UpdatedAlgebraicModel {
    /// `π_j∘i′`: coordinate `j` of the canonical representative.
    pub fn pull_back(&self, j: usize, c: &[u32]) -> Elem {
        pi_k(&self.product, &i_prime(&self.quotient, c), j)
    }
}

/// The action over `m.algebra` with `Pre_a = ⟦·⟧∘Pre_α`.
pub fn induced_action(action: &ActionStructure, m: &AlgebraicModel, env: &Env) -> Result<AlgebraAction, SemanticsError> {
    let mut ev = AlgebraicEvaluator::new(m.clone(), env);
    let pre = action.preconditions().iter().map(|f| ev.eval(f)).collect::<Result<Vec<_>, _>>()?;
    Ok(AlgebraAction::new(m.algebra.as_ref(), action, pre)?)
}

fn build_update(m: &AlgebraicModel, action: AlgebraAction) -> UpdatedAlgebraicModel {
    let product = product_algebra(m.algebra.clone(), &action);
    let quotient = Arc::new(quotient_algebra(product.clone()));
    let val = m.val.iter().map(|(p, x)| (p.clone(), pi(&quotient, &product.constant(x)))).collect();
    let algebra: Arc<dyn Hao> = quotient.clone();
    UpdatedAlgebraicModel { action, product, quotient, model: AlgebraicModel { algebra, val } }
}

/// `M^α` for the named action.
pub fn update_algebraic_model(m: &AlgebraicModel, env: &Env, action: &str) -> Result<UpdatedAlgebraicModel, SemanticsError> {
    let a = env.action(action).ok_or_else(|| SyntaxError::UnresolvedAction(action.to_string()))?;
    Ok(build_update(m, induced_action(a, m, env)?))
}

/// Evaluates formulas on one algebraic model, caching updates per action name.
#[derive(Debug)]
pub struct AlgebraicEvaluator<'e> {
    env: &'e Env,
    model: AlgebraicModel,
    updates: HashMap<String, Box<(UpdatedAlgebraicModel, AlgebraicEvaluator<'e>)>>,
}

impl<'e> AlgebraicEvaluator<'e> {
    pub fn new(model: AlgebraicModel, env: &'e Env) -> Self {
        AlgebraicEvaluator { env, model, updates: HashMap::new() }
    }

    pub fn model(&self) -> &AlgebraicModel {
        &self.model
    }

    pub fn update(&mut self, name: &str) -> Result<&mut (UpdatedAlgebraicModel, AlgebraicEvaluator<'e>), SemanticsError> {
        if !self.updates.contains_key(name) {
            let env = self.env;
            let a = env.action(name).ok_or_else(|| SyntaxError::UnresolvedAction(name.to_string()))?;
            let pre = a.preconditions().iter().map(|f| self.eval(f)).collect::<Result<Vec<_>, _>>()?;
            let action = AlgebraAction::new(self.model.algebra.as_ref(), a, pre)?;
            let up = build_update(&self.model, action);
            let ev = AlgebraicEvaluator::new(up.model.clone(), env);
            self.updates.insert(name.to_string(), Box::new((up, ev)));
        }
        Ok(self.updates.get_mut(name).expect("update just cached"))
    }

    fn agent(&self, a: &Agent) -> Result<usize, SemanticsError> {
        self.model.algebra.agent_index(a).ok_or_else(|| SemanticsError::UnknownAgent(a.to_string()))
    }

    pub fn eval(&mut self, f: &Formula) -> Result<Elem, SemanticsError> {
        let alg = self.model.algebra.clone();
        Ok(match f {
            Formula::Atom(p) => self.model.val.get(p).cloned().ok_or_else(|| SemanticsError::UnknownAtom(p.clone()))?,
            Formula::Bot => alg.bot(),
            Formula::And(a, b) => alg.meet(&self.eval(a)?, &self.eval(b)?),
            Formula::Or(a, b) => alg.join(&self.eval(a)?, &self.eval(b)?),
            Formula::Imp(a, b) => alg.imp(&self.eval(a)?, &self.eval(b)?),
            Formula::Dia(i, a) => {
                let i = self.agent(i)?;
                alg.dia(i, &self.eval(a)?)
            }
            Formula::Box(i, a) => {
                let i = self.agent(i)?;
                alg.boxed(i, &self.eval(a)?)
            }
            Formula::DynDia(r, a) | Formula::DynBox(r, a) => {
                let (_, j) = self.env.resolve(r)?;
                let (up, ev) = self.update(&r.name)?;
                let inner = ev.eval(a)?;
                let pulled = up.pull_back(j, &inner);
                let pre = up.action.pre[j].clone();
                if matches!(f, Formula::DynDia(..)) {
                    alg.meet(&pre, &pulled)
                } else {
                    alg.imp(&pre, &pulled)
                }
            }
        })
    }
}

/// `⟦φ⟧_M`.
pub fn eval_algebraic(m: &AlgebraicModel, env: &Env, f: &Formula) -> Result<Elem, SemanticsError> {
    AlgebraicEvaluator::new(m.clone(), env).eval(f)
}

/// Outcome of [`validity`]: a falsifying valuation when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    pub checked: u64,
    pub countervaluation: Option<BTreeMap<String, String>>,
}

/// Checks `⟦φ⟧_V = ⊤` for every valuation of the atoms of `f` (and of the action preconditions).
pub fn validity(algebra: Arc<dyn Hao>, env: &Env, f: &Formula) -> Result<Validity, SemanticsError> {
    let mut atoms = f.atoms();
    for name in f.action_names() {
        let mut stack = vec![name];
        while let Some(n) = stack.pop() {
            let a = env.action(&n).ok_or_else(|| SyntaxError::UnresolvedAction(n.clone()))?;
            for p in a.preconditions() {
                atoms.extend(p.atoms());
                stack.extend(p.action_names());
            }
        }
    }
    let elems = algebra.elements();
    let count = (elems.len() as u128).checked_pow(atoms.len() as u32);
    match count {
        Some(c) if c <= MAX_VALUATIONS => {}
        _ => {
            let shown = count.map_or_else(|| "too many".to_string(), |c| c.to_string());
            return Err(SemanticsError::TooManyValuations { count: shown, cap: MAX_VALUATIONS });
        }
    }
    let top = algebra.top();
    let atoms: Vec<String> = atoms.into_iter().collect();
    let mut checked = 0;
    for choice in (0..atoms.len()).map(|_| elems.iter()).multi_cartesian_product() {
        let val: BTreeMap<String, Elem> = atoms.iter().cloned().zip(choice.into_iter().cloned()).collect();
        let m = AlgebraicModel { algebra: algebra.clone(), val };
        checked += 1;
        if !algebra.eq_elem(&eval_algebraic(&m, env, f)?, &top) {
            let shown = m.val.iter().map(|(p, x)| (p.clone(), algebra.label(x))).collect();
            return Ok(Validity { valid: false, checked, countervaluation: Some(shown) });
        }
    }
    Ok(Validity { valid: true, checked, countervaluation: None })
}
