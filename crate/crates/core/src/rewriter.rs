//! Reduction-axiom normalizer and a bounded-model equivalence oracle.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{for_each_model, BankConfig, BankCoverage};
use crate::relational::{Evaluator, ModelKind, RelationalError};
use crate::syntax::{ActionRef, Env, Formula, SyntaxError};

/// Default bound on rewrite steps.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Relational(#[from] RelationalError),
    #[error("normalization did not finish within {0} steps")]
    StepLimit(usize),
}

/// The IEAK reduction axioms, read left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `⟨α⟩⊥ ↔ ⊥`
    DiaBot,
    /// `⟨α⟩⊤ ↔ Pre(α)`
    DiaTop,
    /// `[α]⊤ ↔ ⊤`
    BoxTop,
    /// `[α]⊥ ↔ ¬Pre(α)`
    BoxBot,
    /// `⟨α⟩p ↔ Pre(α) ∧ p`
    DiaAtom,
    /// `[α]p ↔ Pre(α) → p`
    BoxAtom,
    /// `⟨α⟩(φ∨ψ) ↔ ⟨α⟩φ ∨ ⟨α⟩ψ`
    DiaOr,
    /// `[α](φ∨ψ) ↔ Pre(α) → (⟨α⟩φ ∨ ⟨α⟩ψ)`
    BoxOr,
    /// `⟨α⟩(φ∧ψ) ↔ ⟨α⟩φ ∧ ⟨α⟩ψ`
    DiaAnd,
    /// `[α](φ∧ψ) ↔ [α]φ ∧ [α]ψ`
    BoxAnd,
    /// `⟨α⟩(φ→ψ) ↔ Pre(α) ∧ (⟨α⟩φ → ⟨α⟩ψ)`
    DiaImp,
    /// `[α](φ→ψ) ↔ ⟨α⟩φ → ⟨α⟩ψ`
    BoxImp,
    /// `⟨α⟩◇φ ↔ Pre(α) ∧ ⋁{◇⟨α_j⟩φ | kαj}`
    DiaDia,
    /// `[α]◇φ ↔ Pre(α) → ⋁{◇⟨α_j⟩φ | kαj}`
    BoxDia,
    /// `⟨α⟩□φ ↔ Pre(α) ∧ ⋀{□[α_j]φ | kαj}`
    DiaBox,
    /// `[α]□φ ↔ Pre(α) → ⋀{□[α_j]φ | kαj}`
    BoxBox,
}

impl Axiom {
    pub const ALL: [Axiom; 16] = [
        Axiom::DiaBot,
        Axiom::DiaTop,
        Axiom::BoxTop,
        Axiom::BoxBot,
        Axiom::DiaAtom,
        Axiom::BoxAtom,
        Axiom::DiaOr,
        Axiom::BoxOr,
        Axiom::DiaAnd,
        Axiom::BoxAnd,
        Axiom::DiaImp,
        Axiom::BoxImp,
        Axiom::DiaDia,
        Axiom::BoxDia,
        Axiom::DiaBox,
        Axiom::BoxBox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::DiaBot => "dia-bot",
            Axiom::DiaTop => "dia-top",
            Axiom::BoxTop => "box-top",
            Axiom::BoxBot => "box-bot",
            Axiom::DiaAtom => "dia-atom",
            Axiom::BoxAtom => "box-atom",
            Axiom::DiaOr => "dia-or",
            Axiom::BoxOr => "box-or",
            Axiom::DiaAnd => "dia-and",
            Axiom::BoxAnd => "box-and",
            Axiom::DiaImp => "dia-imp",
            Axiom::BoxImp => "box-imp",
            Axiom::DiaDia => "dia-dia",
            Axiom::BoxDia => "box-dia",
            Axiom::DiaBox => "dia-box",
            Axiom::BoxBox => "box-box",
        }
    }

    fn is_box(self) -> bool {
        matches!(
            self,
            Axiom::BoxTop
                | Axiom::BoxBot
                | Axiom::BoxAtom
                | Axiom::BoxOr
                | Axiom::BoxAnd
                | Axiom::BoxImp
                | Axiom::BoxDia
                | Axiom::BoxBox
        )
    }

    /// The left-hand side for an action reference and parameters; `phi` stands for `p` in
    /// the atom axioms, `agent` is used by the modal ones.
    pub fn lhs(self, action: &ActionRef, phi: &Formula, psi: &Formula, agent: &str) -> Formula {
        let arg = match self {
            Axiom::DiaBot | Axiom::BoxBot => Formula::Bot,
            Axiom::DiaTop | Axiom::BoxTop => Formula::top(),
            Axiom::DiaAtom | Axiom::BoxAtom => phi.clone(),
            Axiom::DiaOr | Axiom::BoxOr => Formula::or(phi.clone(), psi.clone()),
            Axiom::DiaAnd | Axiom::BoxAnd => Formula::and(phi.clone(), psi.clone()),
            Axiom::DiaImp | Axiom::BoxImp => Formula::imp(phi.clone(), psi.clone()),
            Axiom::DiaDia | Axiom::BoxDia => Formula::dia(agent, phi.clone()),
            Axiom::DiaBox | Axiom::BoxBox => Formula::boxed(agent, phi.clone()),
        };
        if self.is_box() {
            Formula::DynBox(action.clone(), Box::new(arg))
        } else {
            Formula::DynDia(action.clone(), Box::new(arg))
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The reduction axioms of the classical logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalAxiom {
    /// `⟨α⟩p ↔ Pre(α) ∧ p`
    Atom,
    /// `⟨α⟩¬φ ↔ Pre(α) ∧ ¬⟨α⟩φ`
    Neg,
    /// `⟨α⟩(φ∨ψ) ↔ ⟨α⟩φ ∨ ⟨α⟩ψ`
    Or,
    /// `⟨α⟩◇φ ↔ Pre(α) ∧ ⋁{◇⟨α_j⟩φ | kαj}`
    Dia,
}

impl ClassicalAxiom {
    pub const ALL: [ClassicalAxiom; 4] = [ClassicalAxiom::Atom, ClassicalAxiom::Neg, ClassicalAxiom::Or, ClassicalAxiom::Dia];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalAxiom::Atom => "classical-atom",
            ClassicalAxiom::Neg => "classical-neg",
            ClassicalAxiom::Or => "classical-or",
            ClassicalAxiom::Dia => "classical-dia",
        }
    }

    /// Both sides of the axiom instance.
    pub fn instance(
        self,
        env: &Env,
        action: &ActionRef,
        phi: &Formula,
        psi: &Formula,
        agent: &str,
    ) -> Result<(Formula, Formula), RewriteError> {
        let dia = |f: Formula| Formula::DynDia(action.clone(), Box::new(f));
        let (a, j) = env.resolve(action)?;
        let pre = a.pre(j).clone();
        Ok(match self {
            ClassicalAxiom::Atom => (dia(phi.clone()), Formula::and(pre, phi.clone())),
            ClassicalAxiom::Neg => {
                (dia(Formula::neg(phi.clone())), Formula::and(pre, Formula::neg(dia(phi.clone()))))
            }
            ClassicalAxiom::Or => {
                (dia(Formula::or(phi.clone(), psi.clone())), Formula::or(dia(phi.clone()), dia(psi.clone())))
            }
            ClassicalAxiom::Dia => {
                let lhs = dia(Formula::dia(agent, phi.clone()));
                let rhs = apply(env, &lhs)?.1;
                (lhs, rhs)
            }
        })
    }
}

impl fmt::Display for ClassicalAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rewrites a dynamic formula whose argument is static, at the root.
///
/// Returns `None` when `f` is not dynamic.
pub fn rewrite_root(env: &Env, f: &Formula) -> Result<Option<(Axiom, Formula)>, RewriteError> {
    if !matches!(f, Formula::DynDia(..) | Formula::DynBox(..)) {
        return Ok(None);
    }
    apply(env, f).map(Some)
}

fn apply(env: &Env, f: &Formula) -> Result<(Axiom, Formula), RewriteError> {
    let (r, arg, is_box) = match f {
        Formula::DynDia(r, a) => (r, a.as_ref(), false),
        Formula::DynBox(r, a) => (r, a.as_ref(), true),
        _ => unreachable!("apply is only called on dynamic formulas"),
    };
    let (action, k) = env.resolve(r)?;
    let pre = action.pre(k).clone();
    let dia = |g: &Formula| Formula::DynDia(r.clone(), Box::new(g.clone()));
    let bx = |g: &Formula| Formula::DynBox(r.clone(), Box::new(g.clone()));
    let modal = |agent: &crate::syntax::Agent, g: &Formula, box_: bool| -> Result<Vec<Formula>, RewriteError> {
        let succ = action.succ(agent, k).ok_or_else(|| SyntaxError::InvalidAction {
            action: action.name().to_string(),
            reason: format!("no relation for agent `{agent}`"),
        })?;
        Ok(succ
            .iter()
            .map(|&j| {
                let rj = env.reference(&r.name, j);
                if box_ {
                    Formula::boxed(agent.clone(), Formula::DynBox(rj, Box::new(g.clone())))
                } else {
                    Formula::dia(agent.clone(), Formula::DynDia(rj, Box::new(g.clone())))
                }
            })
            .collect())
    };
    Ok(match (is_box, arg) {
        (false, Formula::Bot) => (Axiom::DiaBot, Formula::Bot),
        (true, Formula::Bot) => (Axiom::BoxBot, Formula::neg(pre)),
        (false, g) if g.is_top() => (Axiom::DiaTop, pre),
        (true, g) if g.is_top() => (Axiom::BoxTop, Formula::top()),
        (false, Formula::Atom(_)) => (Axiom::DiaAtom, Formula::and(pre, arg.clone())),
        (true, Formula::Atom(_)) => (Axiom::BoxAtom, Formula::imp(pre, arg.clone())),
        (false, Formula::Or(a, b)) => (Axiom::DiaOr, Formula::or(dia(a), dia(b))),
        (true, Formula::Or(a, b)) => (Axiom::BoxOr, Formula::imp(pre, Formula::or(dia(a), dia(b)))),
        (false, Formula::And(a, b)) => (Axiom::DiaAnd, Formula::and(dia(a), dia(b))),
        (true, Formula::And(a, b)) => (Axiom::BoxAnd, Formula::and(bx(a), bx(b))),
        (false, Formula::Imp(a, b)) => (Axiom::DiaImp, Formula::and(pre, Formula::imp(dia(a), dia(b)))),
        (true, Formula::Imp(a, b)) => (Axiom::BoxImp, Formula::imp(dia(a), dia(b))),
        (false, Formula::Dia(i, a)) => (Axiom::DiaDia, Formula::and(pre, Formula::disj(modal(i, a, false)?))),
        (true, Formula::Dia(i, a)) => (Axiom::BoxDia, Formula::imp(pre, Formula::disj(modal(i, a, false)?))),
        (false, Formula::Box(i, a)) => (Axiom::DiaBox, Formula::and(pre, Formula::conj(modal(i, a, true)?))),
        (true, Formula::Box(i, a)) => (Axiom::BoxBox, Formula::imp(pre, Formula::conj(modal(i, a, true)?))),
        (_, Formula::DynDia(..) | Formula::DynBox(..)) => {
            unreachable!("redexes have static arguments")
        }
    })
}

/// Both sides of an axiom instance; the right side is the one-step rewrite of the left.
pub fn axiom_instance(
    env: &Env,
    axiom: Axiom,
    action: &ActionRef,
    phi: &Formula,
    psi: &Formula,
    agent: &str,
) -> Result<(Formula, Formula), RewriteError> {
    let lhs = axiom.lhs(action, phi, psi, agent);
    let (used, rhs) = apply(env, &lhs)?;
    debug_assert_eq!(used, axiom, "axiom selection for {lhs}");
    Ok((lhs, rhs))
}

/// Which innermost redex to rewrite first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    RightmostInnermost,
}

/// One rewrite: the axiom, the position of the redex, and the redex before and after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub axiom: Axiom,
    pub path: Vec<usize>,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn find_redex(f: &Formula, strategy: Strategy, path: &mut Vec<usize>) -> bool {
    match f {
        Formula::DynDia(_, a) | Formula::DynBox(_, a) if a.is_static() => true,
        _ => {
            let n = match f {
                Formula::Atom(_) | Formula::Bot => 0,
                Formula::And(..) | Formula::Or(..) | Formula::Imp(..) => 2,
                _ => 1,
            };
            let order: Vec<usize> = match strategy {
                Strategy::LeftmostInnermost => (0..n).collect(),
                Strategy::RightmostInnermost => (0..n).rev().collect(),
            };
            for i in order {
                let child = f.child(i).expect("child index in range");
                if child.is_static() {
                    continue;
                }
                path.push(i);
                if find_redex(child, strategy, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
    }
}

/// Position of the innermost dynamic subformula chosen by `strategy`.
pub fn find_innermost(f: &Formula, strategy: Strategy) -> Option<Vec<usize>> {
    let mut path = Vec::new();
    find_redex(f, strategy, &mut path).then_some(path)
}

/// Rewrites the leftmost innermost redex; `None` iff `f` is static.
pub fn reduce_step(env: &Env, f: &Formula) -> Result<Option<(Formula, RewriteStep)>, RewriteError> {
    reduce_step_with(env, f, Strategy::LeftmostInnermost)
}

pub fn reduce_step_with(
    env: &Env,
    f: &Formula,
    strategy: Strategy,
) -> Result<Option<(Formula, RewriteStep)>, RewriteError> {
    let Some(path) = find_innermost(f, strategy) else {
        return Ok(None);
    };
    let redex = f.at_path(&path).expect("redex path");
    let (axiom, rhs) = apply(env, redex)?;
    let step = RewriteStep { axiom, path: path.clone(), before: redex.to_string(), after: rhs.to_string() };
    let out = f.replace_at(&path, rhs).expect("redex path");
    Ok(Some((out, step)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub strategy: Strategy,
    pub max_steps: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { strategy: Strategy::LeftmostInnermost, max_steps: DEFAULT_MAX_STEPS }
    }
}

/// Rewrites until static, with the default strategy and step limit.
pub fn normalize(env: &Env, f: &Formula) -> Result<(Formula, RewriteTrace), RewriteError> {
    normalize_with(env, f, NormalizeOptions::default())
}

pub fn normalize_with(env: &Env, f: &Formula, opts: NormalizeOptions) -> Result<(Formula, RewriteTrace), RewriteError> {
    env.check_refs(f)?;
    let mut cur = f.clone();
    let mut trace = RewriteTrace::default();
    while let Some((next, step)) = reduce_step_with(env, &cur, opts.strategy)? {
        if trace.steps.len() == opts.max_steps {
            return Err(RewriteError::StepLimit(opts.max_steps));
        }
        trace.steps.push(step);
        cur = next;
    }
    Ok((cur, trace))
}

/// Re-applies a trace to `f`, checking each recorded redex; returns the final formula.
pub fn replay(env: &Env, f: &Formula, trace: &RewriteTrace) -> Result<Formula, String> {
    let mut cur = f.clone();
    for (i, step) in trace.steps.iter().enumerate() {
        let redex = cur.at_path(&step.path).ok_or_else(|| format!("step {i}: invalid path"))?;
        if redex.to_string() != step.before {
            return Err(format!("step {i}: redex is {redex}, trace says {}", step.before));
        }
        let (axiom, rhs) = rewrite_root(env, redex)
            .map_err(|e| format!("step {i}: {e}"))?
            .ok_or_else(|| format!("step {i}: not a redex"))?;
        if axiom != step.axiom || rhs.to_string() != step.after {
            return Err(format!("step {i}: rewrite does not match the trace"));
        }
        cur = cur.replace_at(&step.path, rhs).expect("checked path");
    }
    Ok(cur)
}

/// A model and world where two formulas differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub kind: ModelKind,
    pub worlds: Vec<String>,
    pub order: Vec<(String, String)>,
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    pub valuation: BTreeMap<String, Vec<String>>,
    pub world: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub coverage: BankCoverage,
    pub countermodel: Option<Countermodel>,
}

/// Compares extensions over the model bank; classical models use Boolean clauses.
pub fn equivalence_check(
    env: &Env,
    phi: &Formula,
    psi: &Formula,
    bank: &BankConfig,
) -> Result<EquivalenceVerdict, RewriteError> {
    env.check_refs(phi)?;
    env.check_refs(psi)?;
    let mut atoms = phi.atoms();
    atoms.extend(psi.atoms());
    for a in env.actions() {
        for p in a.preconditions() {
            atoms.extend(p.atoms());
        }
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    let mut error = None;
    let mut counter = None;
    let coverage = for_each_model(bank, env.agents(), &atoms, |m| {
        let mut ev = Evaluator::new(m, env);
        let res = ev.eval(phi).and_then(|x| Ok((x, ev.eval(psi)?)));
        match res {
            Err(e) => {
                error = Some(e);
                false
            }
            Ok((x, y)) if x != y => {
                let f = m.frame();
                let w = (0..m.len()).find(|&w| x.contains(w) != y.contains(w)).expect("sets differ");
                let pairs = |r: &crate::relational::Relation| {
                    r.pairs().into_iter().map(|(a, b)| (f.worlds()[a].clone(), f.worlds()[b].clone())).collect()
                };
                counter = Some(Countermodel {
                    kind: m.kind(),
                    worlds: f.worlds().to_vec(),
                    order: pairs(f.order()),
                    relations: f.agents().iter().enumerate().map(|(i, a)| (a.to_string(), pairs(f.relation(i)))).collect(),
                    valuation: m.valuation().iter().map(|(p, s)| (p.clone(), f.set_names(s))).collect(),
                    world: f.worlds()[w].clone(),
                    left: f.set_names(&x),
                    right: f.set_names(&y),
                });
                false
            }
            Ok(_) => true,
        }
    });
    if let Some(e) = error {
        return Err(e.into());
    }
    Ok(EquivalenceVerdict { equivalent: counter.is_none(), coverage, countermodel: counter })
}
