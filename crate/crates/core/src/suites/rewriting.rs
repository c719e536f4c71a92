use rand::Rng;

use super::{Suite, SuiteConfig, SuiteReport};
use crate::enumerate::{random_action, rng, FormulaShape};
use crate::rewriter::{equivalence_check, normalize_with, replay, NormalizeOptions, Strategy, DEFAULT_MAX_STEPS};
use crate::syntax::{Env, Formula};

/// Nested dynamic modalities in the random formulas.
const MAX_DYNAMIC: usize = 2;

/// Random dynamic formulas normalize within the step limit to static formulas that replay
/// from their traces and are equivalent to the input (and to the rightmost-innermost result)
/// on the model bank.
pub fn verify_rewriter(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Rewriter, cfg);
    let mut r = rng(cfg.random_seed);
    let agents = cfg.agents();
    let bank = cfg.bank();
    let mut steps_max = 0;
    for _ in 0..cfg.sample_count {
        let a0 = agents[0].clone();
        let pool_a = [Formula::atom("p"), Formula::atom("q"), Formula::top(), Formula::neg(Formula::atom("q"))];
        let pool_b = [Formula::atom("p"), Formula::dia(a0.clone(), Formula::atom("q")), Formula::boxed(a0, Formula::atom("p"))];
        let alpha = random_action(&mut r, "alpha", &agents, cfg.max_action_states, &pool_a);
        let beta = random_action(&mut r, "beta", &agents, cfg.max_action_states, &pool_b);
        let env = Env::with_actions(agents.clone(), [alpha.clone(), beta.clone()]).expect("fresh environment");
        let shape =
            FormulaShape::static_over(&["p", "q"], &agents, cfg.max_formula_depth).with_actions(&[alpha, beta], MAX_DYNAMIC);
        let mut f = shape.sample(&mut r, cfg.max_formula_depth);
        while f.is_static() {
            let depth = r.gen_range(1..=cfg.max_formula_depth);
            f = shape.sample(&mut r, depth);
        }
        let opts = NormalizeOptions { max_steps: DEFAULT_MAX_STEPS, ..NormalizeOptions::default() };
        let (nf, trace) = match normalize_with(&env, &f, opts) {
            Ok(x) => x,
            Err(e) => {
                report.fail(format!("terminates: {f}: {e}"));
                continue;
            }
        };
        steps_max = steps_max.max(trace.len());
        report.record("terminates", true, String::new);
        report.record("static", nf.is_static(), || format!("{f} gave {nf}"));
        let replayed = replay(&env, &f, &trace);
        report.record("replay", replayed.as_ref() == Ok(&nf), || format!("{f}: {replayed:?}"));
        match equivalence_check(&env, &f, &nf, &bank) {
            Ok(v) => report.record("equivalent", v.equivalent, || format!("{f} vs {nf}: {:?}", v.countermodel)),
            Err(e) => report.fail(format!("equivalent: {f}: {e}")),
        }
        let right = NormalizeOptions { strategy: Strategy::RightmostInnermost, ..opts };
        match normalize_with(&env, &f, right).map_err(|e| e.to_string()).and_then(|(other, _)| {
            equivalence_check(&env, &nf, &other, &bank).map_err(|e| e.to_string())
        }) {
            Ok(v) => report.record("strategy-invariant", v.equivalent, || format!("{f}: {:?}", v.countermodel)),
            Err(e) => report.fail(format!("strategy-invariant: {f}: {e}")),
        }
    }
    report.note(format!("longest trace: {steps_max} steps"));
    report.finish()
}
