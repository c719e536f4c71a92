use rand::Rng;

use super::{Suite, SuiteConfig, SuiteReport};
use crate::enumerate::{random_action, random_model, rng, FormulaShape, FrameSampler};
use crate::relational::{eval_ik, ModelKind};
use crate::semantics::{eval_algebraic, AlgebraicModel};
use crate::syntax::{Env, Formula};

/// `eval_ik(F, V, φ)` and `eval_algebraic(F⁺, V, φ)` denote the same downset on random
/// IK models and random formulas with dynamic modalities.
pub fn verify_agreement(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Agreement, cfg);
    let mut r = rng(cfg.random_seed);
    let mut sampler = FrameSampler::new();
    let agents = cfg.agents();
    let atoms = ["p".to_string(), "q".to_string()];
    let mut dynamic = 0;
    for _ in 0..cfg.sample_count {
        let n = r.gen_range(1..=cfg.max_worlds);
        let frame = sampler.sample(&mut r, n, &agents, ModelKind::Ik);
        let model = random_model(&mut r, frame, &atoms, ModelKind::Ik);
        let a0 = agents[0].clone();
        let pool = [
            Formula::atom("p"),
            Formula::top(),
            Formula::imp(Formula::atom("q"), Formula::atom("p")),
            Formula::dia(a0, Formula::atom("q")),
        ];
        let alpha = random_action(&mut r, "alpha", &agents, cfg.max_action_states, &pool);
        let beta = random_action(&mut r, "beta", &agents, cfg.max_action_states, &pool);
        let env = Env::with_actions(agents.clone(), [alpha.clone(), beta.clone()]).expect("fresh environment");
        let shape = FormulaShape::static_over(&["p", "q"], &agents, cfg.max_formula_depth).with_actions(&[alpha, beta], 2);
        let f = shape.sample(&mut r, cfg.max_formula_depth);
        if !f.is_static() {
            dynamic += 1;
        }
        let relational = eval_ik(&model, &env, &f);
        let algebraic = AlgebraicModel::from_model(&model)
            .map_err(|e| e.to_string())
            .and_then(|(m, c)| eval_algebraic(&m, &env, &f).map(|x| c.set(x[0]).clone()).map_err(|e| e.to_string()));
        match (relational, algebraic) {
            (Ok(a), Ok(b)) => report.record("agree", a == b, || {
                format!(
                    "{f} on frame {:?} order {:?}: relational {:?} algebraic {:?}",
                    model.frame().worlds(),
                    model.frame().order().pairs(),
                    model.frame().set_names(&a),
                    model.frame().set_names(&b)
                )
            }),
            (Err(e), _) => report.fail(format!("relational evaluation of {f}: {e}")),
            (_, Err(e)) => report.fail(format!("algebraic evaluation of {f}: {e}")),
        }
    }
    report.note(format!("{dynamic} of {} formulas contain dynamic modalities", cfg.sample_count));
    report.finish()
}
