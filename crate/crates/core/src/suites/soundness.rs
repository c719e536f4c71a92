use rand::seq::SliceRandom;
use rand::Rng;

use super::{Suite, SuiteConfig, SuiteReport};
use crate::enumerate::{for_each_model, random_action, rng, BankConfig, FormulaShape};
use crate::relational::{Evaluator, ModelKind};
use crate::rewriter::{axiom_instance, Axiom, ClassicalAxiom};
use crate::syntax::{ActionRef, Env, Formula};

/// Action draws per model.
const DRAWS_PER_MODEL: usize = 2;

/// Enough for every valuation of two atoms on three worlds.
const MAX_VALUATIONS: usize = 64;

/// Every reduction axiom instance has equal extensions on both sides, on every model of the
/// bank; the classical axioms are checked on the classical models.
pub fn verify_soundness(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Soundness, cfg);
    let agents = cfg.agents();
    let atoms = vec!["p".to_string(), "q".to_string()];
    let pool = [Formula::atom("p"), Formula::atom("q")];
    let shape = FormulaShape::static_over(&["p", "q"], &agents, cfg.max_formula_depth);
    let mut r = rng(cfg.random_seed ^ 0x5eed);
    let bank = BankConfig { max_valuations: MAX_VALUATIONS, exhaustive_frames: super::EXHAUSTIVE_FRAMES, ..cfg.bank() };
    let coverage = for_each_model(&bank, &agents, &atoms, |model| {
        for _ in 0..DRAWS_PER_MODEL {
            let action = random_action(&mut r, "alpha", &agents, cfg.max_action_states, &pool);
            let point = action.states()[r.gen_range(0..action.len())].clone();
            let env = Env::with_actions(agents.clone(), [action]).expect("fresh environment");
            let rf = ActionRef::at("alpha", point);
            let phi = shape.sample(&mut r, cfg.max_formula_depth);
            let mut psi = shape.sample(&mut r, cfg.max_formula_depth);
            if phi == Formula::Bot && psi == Formula::Bot {
                psi = Formula::atom("q");
            }
            let atom = Formula::atom(atoms.choose(&mut r).expect("atoms").clone());
            let agent = agents.choose(&mut r).expect("agents").to_string();
            let mut ev = Evaluator::new(model, &env);
            let mut check = |name: &str, lhs: &Formula, rhs: &Formula, report: &mut SuiteReport| {
                let (l, rr) = match (ev.eval(lhs), ev.eval(rhs)) {
                    (Ok(l), Ok(rr)) => (l, rr),
                    (Err(e), _) | (_, Err(e)) => {
                        report.fail(format!("{name}: evaluation error {e}"));
                        return;
                    }
                };
                report.record(name, l == rr, || {
                    format!(
                        "{lhs} vs {rhs} on {} model {:?} order {:?}",
                        model.kind(),
                        model.frame().worlds(),
                        model.frame().order().pairs()
                    )
                });
            };
            for axiom in Axiom::ALL {
                let x = if matches!(axiom, Axiom::DiaAtom | Axiom::BoxAtom) { &atom } else { &phi };
                match axiom_instance(&env, axiom, &rf, x, &psi, &agent) {
                    Ok((lhs, rhs)) => check(axiom.name(), &lhs, &rhs, &mut report),
                    Err(e) => report.fail(format!("{axiom}: {e}")),
                }
            }
            if model.kind() == ModelKind::Classical {
                for axiom in ClassicalAxiom::ALL {
                    let x = if axiom == ClassicalAxiom::Atom { &atom } else { &phi };
                    match axiom.instance(&env, &rf, x, &psi, &agent) {
                        Ok((lhs, rhs)) => check(axiom.name(), &lhs, &rhs, &mut report),
                        Err(e) => report.fail(format!("{axiom}: {e}")),
                    }
                }
            }
        }
        true
    });
    report.note(format!(
        "{} models; exhaustive sizes {:?}; sampled sizes {:?}; all valuations: {}",
        coverage.models, coverage.exhaustive_sizes, coverage.sampled_sizes, coverage.all_valuations
    ));
    report.finish()
}
