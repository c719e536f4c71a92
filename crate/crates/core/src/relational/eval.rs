use std::borrow::Cow;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::model::{Model, ModelKind};
use super::update::{update_with_preconditions, UpdateTrace};
use super::RelationalError;
use crate::syntax::{ActionStructure, Env, Formula};

/// A model updated by one action, with the precondition extensions that produced it.
#[derive(Debug)]
pub struct Updated<'e> {
    pub pre: Vec<FixedBitSet>,
    pub trace: UpdateTrace,
    pub eval: Evaluator<'e>,
}

/// Evaluates formulas on one model, caching updates per action name.
///
/// Updates do not depend on the designated state, so `α` and every shift `α@j`
/// share one cached updated model.
#[derive(Debug)]
pub struct Evaluator<'e> {
    env: &'e Env,
    model: Cow<'e, Model>,
    boolean: bool,
    updates: HashMap<String, Box<Updated<'e>>>,
}

impl<'e> Evaluator<'e> {
    /// Uses Boolean clauses for classical models and downset clauses otherwise.
    pub fn new(model: &'e Model, env: &'e Env) -> Self {
        let boolean = model.kind() == ModelKind::Classical;
        Evaluator { env, model: Cow::Borrowed(model), boolean, updates: HashMap::new() }
    }

    fn owned(model: Model, env: &'e Env, boolean: bool) -> Self {
        Evaluator { env, model: Cow::Owned(model), boolean, updates: HashMap::new() }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// The update of the current model by the named action.
    pub fn update(&mut self, name: &str) -> Result<&mut Updated<'e>, RelationalError> {
        if !self.updates.contains_key(name) {
            let env = self.env;
            let action: &ActionStructure = env
                .action(name)
                .ok_or_else(|| crate::syntax::SyntaxError::UnresolvedAction(name.to_string()))?;
            let pre = action
                .preconditions()
                .iter()
                .map(|f| self.eval(f))
                .collect::<Result<Vec<_>, _>>()?;
            let (m, trace) = update_with_preconditions(&self.model, action, &pre)?;
            let eval = Evaluator::owned(m, env, self.boolean);
            self.updates.insert(name.to_string(), Box::new(Updated { pre, trace, eval }));
        }
        Ok(self.updates.get_mut(name).expect("update just cached"))
    }

    pub fn eval(&mut self, f: &Formula) -> Result<FixedBitSet, RelationalError> {
        let x = self.eval_node(f)?;
        debug_assert!(self.boolean || self.model.frame().is_downset(&x), "extension of {f} is not a downset");
        Ok(x)
    }

    fn eval_node(&mut self, f: &Formula) -> Result<FixedBitSet, RelationalError> {
        Ok(match f {
            Formula::Atom(p) => self
                .model
                .val(p)
                .cloned()
                .ok_or_else(|| RelationalError::UnknownAtom(p.clone()))?,
            Formula::Bot => self.model.frame().empty_set(),
            Formula::And(a, b) => {
                let mut x = self.eval(a)?;
                x.intersect_with(&self.eval(b)?);
                x
            }
            Formula::Or(a, b) => {
                let mut x = self.eval(a)?;
                x.union_with(&self.eval(b)?);
                x
            }
            Formula::Imp(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                self.imp(&x, &y)
            }
            Formula::Dia(i, a) => {
                let i = self.agent(i)?;
                let x = self.eval(a)?;
                self.model.frame().dia(i, &x)
            }
            Formula::Box(i, a) => {
                let i = self.agent(i)?;
                let x = self.eval(a)?;
                let frame = self.model.frame();
                if self.boolean {
                    frame.relation(i).universal_preimage(&x)
                } else {
                    frame.boxed(i, &x)
                }
            }
            Formula::DynDia(r, a) | Formula::DynBox(r, a) => {
                let (_, j) = self.env.resolve(r)?;
                let up = self.update(&r.name)?;
                let inner = up.eval.eval(a)?;
                let pulled = up.trace.pull_back(j, &inner);
                let pre = up.pre[j].clone();
                if matches!(f, Formula::DynDia(..)) {
                    let mut x = pre;
                    x.intersect_with(&pulled);
                    x
                } else {
                    self.imp(&pre, &pulled)
                }
            }
        })
    }

    fn agent(&self, a: &crate::syntax::Agent) -> Result<usize, RelationalError> {
        self.model.frame().agent_index(a).ok_or_else(|| RelationalError::UnknownAgent(a.to_string()))
    }

    fn imp(&self, x: &FixedBitSet, y: &FixedBitSet) -> FixedBitSet {
        if self.boolean {
            let mut out = x.clone();
            out.toggle_range(..);
            out.union_with(y);
            out
        } else {
            self.model.frame().downset_imp(x, y)
        }
    }
}

/// Extension of `f` in a classical model, using Boolean clauses.
pub fn eval_classical(model: &Model, env: &Env, f: &Formula) -> Result<FixedBitSet, RelationalError> {
    if model.kind() != ModelKind::Classical {
        return Err(RelationalError::WrongKind { expected: ModelKind::Classical, found: model.kind() });
    }
    Evaluator::new(model, env).eval(f)
}

/// Extension of `f` in an IK or MIPC model; always a downset.
pub fn eval_ik(model: &Model, env: &Env, f: &Formula) -> Result<FixedBitSet, RelationalError> {
    if model.kind() == ModelKind::Classical {
        let m = model.with_kind(ModelKind::Ik)?;
        return Evaluator::new(&m, env).eval(f);
    }
    Evaluator::new(model, env).eval(f)
}

/// Extension of `f` under the model's own semantics.
pub fn eval(model: &Model, env: &Env, f: &Formula) -> Result<FixedBitSet, RelationalError> {
    Evaluator::new(model, env).eval(f)
}

/// `M^α` together with its trace.
pub fn product_update(
    model: &Model,
    env: &Env,
    action: &str,
) -> Result<(Model, UpdateTrace), RelationalError> {
    let mut ev = Evaluator::new(model, env);
    let up = ev.update(action)?;
    Ok((up.eval.model().clone(), up.trace.clone()))
}
