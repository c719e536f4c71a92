use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{algebra_actions, frame_family, Suite, SuiteConfig, SuiteReport};
use crate::algebra::{product_algebra, quotient_algebra, Hao, TableAlgebra};
use crate::duality::{complex_algebra, frame_isomorphism, prime_structure, update_frame, DualityError};
use crate::enumerate::rng;
use crate::relational::{coproduct_frame, Frame, ModelKind};

fn iso(a: &Frame, b: &Frame) -> Result<bool, DualityError> {
    Ok(frame_isomorphism(a, b)?.is_some())
}

/// `F ≅ (F⁺)₊`, `(∏ₐ𝔸)₊ ≅ ∐ₐ𝔸₊` and `(𝔸ᵃ)₊ ≅ (𝔸₊)ᵃ` over the frame family.
pub fn verify_duality(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Duality, cfg);
    let mut r = rng(cfg.random_seed);
    let family = frame_family(cfg, &cfg.agents(), &[ModelKind::Ik, ModelKind::Mipc], &mut r, &mut report);
    for (kind, frame) in family {
        let run = |report: &mut SuiteReport, r: &mut _| -> Result<(), DualityError> {
            let alg = complex_algebra(&frame)?.algebra;
            let dual = prime_structure(&alg)?;
            let ok = iso(&frame, &dual.frame)?;
            report.record("frame-round-trip", ok, || format!("{kind} frame {:?}", frame.order().pairs()));
            let primes = &dual.primes;
            let base: Arc<dyn Hao> = Arc::new(alg.clone());
            for act in algebra_actions(cfg, &alg, kind == ModelKind::Mipc, r) {
                let prod = product_algebra(base.clone(), &act);
                let (tp, _) = TableAlgebra::materialize(&prod)?;
                let lhs = prime_structure(&tp)?.frame;
                let rhs = coproduct_frame(&dual.frame, &act.states, &act.succ)?;
                let ok = iso(&lhs, &rhs)?;
                report.record("product-dual", ok, || format!("frame {:?} action {:?}", frame.order().pairs(), act.succ));

                let (tq, _) = TableAlgebra::materialize(&quotient_algebra(prod))?;
                let lhs = prime_structure(&tq)?.frame;
                let pre: Vec<FixedBitSet> = act
                    .pre
                    .iter()
                    .map(|x| {
                        let mut s = FixedBitSet::with_capacity(primes.len());
                        s.extend(primes.iter().enumerate().filter(|(_, &p)| alg.le(p, x[0])).map(|(i, _)| i));
                        s
                    })
                    .collect();
                let rhs = update_frame(&dual.frame, &act.states, &act.succ, &pre)?;
                let ok = iso(&lhs, &rhs)?;
                report.record("update-dual", ok, || {
                    format!("frame {:?} action {:?} pre {:?}", frame.order().pairs(), act.succ, act.pre)
                });
            }
            Ok(())
        };
        if let Err(e) = run(&mut report, &mut r) {
            report.fail(format!("{kind} frame {:?}: {e}", frame.order().pairs()));
        }
    }
    report.finish()
}
