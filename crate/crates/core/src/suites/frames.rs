use itertools::Itertools;

use super::{frame_family, Suite, SuiteConfig, SuiteReport};
use crate::enumerate::{frame_relations, posets, random_action, random_model, rng};
use crate::relational::{check_ik_frame, product_update, Frame, ModelKind, Relation};
use crate::syntax::{Env, Formula};

/// Frame conditions on the enumerated family, closure of IK and MIPC frames under product
/// update, and the conditions of any `extra` frames (each expected to be valid).
pub fn verify_frames(cfg: &SuiteConfig, extra: &[(String, Frame, ModelKind)]) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Frames, cfg);
    let mut r = rng(cfg.random_seed);

    for (name, frame, kind) in extra {
        let verdict = check_ik_frame(frame, *kind);
        report.record("fixture", verdict.is_valid(), || {
            format!("{name} ({kind}): {}", verdict.violations.iter().join("; "))
        });
    }

    // The enumerator filters relations by bitmask predicates; check_ik_frame must agree on every relation.
    for n in 1..=cfg.max_worlds.min(3) {
        for order in posets(n) {
            for kind in [ModelKind::Ik, ModelKind::Mipc] {
                let allowed = frame_relations(&order, kind);
                let found = (0u64..1 << (n * n))
                    .map(|m| Relation::from_mask(n, m))
                    .filter(|rel| {
                        let worlds = (0..n).map(|i| format!("w{i}")).collect();
                        let f = Frame::new(worlds, order.clone(), vec!["a".into()], vec![rel.clone()])
                            .expect("well formed");
                        check_ik_frame(&f, kind).is_valid()
                    })
                    .collect_vec();
                report.record("relation-count", found == allowed, || {
                    format!("{kind} relations on {:?}: checker {} vs enumerator {}", order.pairs(), found.len(), allowed.len())
                });
            }
        }
    }

    let agents = cfg.agents();
    let atoms = ["p".to_string(), "q".to_string()];
    let pool = [Formula::atom("p"), Formula::atom("q"), Formula::top(), Formula::dia(agents[0].clone(), Formula::atom("p"))];
    let family = frame_family(cfg, &agents, &[ModelKind::Classical, ModelKind::Ik, ModelKind::Mipc], &mut r, &mut report);
    for (kind, frame) in family {
        let verdict = check_ik_frame(&frame, kind);
        report.record("enumerated", verdict.is_valid(), || format!("{kind} frame {:?}: {:?}", frame, verdict.violations));

        let model = random_model(&mut r, frame, &atoms, kind);
        let mut action = random_action(&mut r, "act", &agents, cfg.max_action_states, &pool);
        if kind == ModelKind::Mipc {
            action = equivalence_closure(&action);
        }
        let env = Env::with_actions(agents.clone(), [action]).expect("fresh environment");
        match product_update(&model, &env, "act") {
            Ok((updated, _)) => {
                let v = check_ik_frame(updated.frame(), kind);
                report.record("update-closure", v.is_valid(), || {
                    format!("{kind} update of {:?}: {}", model.frame().worlds(), v.violations.iter().join("; "))
                });
            }
            Err(e) => report.fail(format!("update-closure: {e}")),
        }
    }
    report.finish()
}

/// The action with each relation replaced by its reflexive-symmetric-transitive closure.
fn equivalence_closure(a: &crate::syntax::ActionStructure) -> crate::syntax::ActionStructure {
    let k = a.len();
    let rel = a
        .agents()
        .map(|ag| {
            let mut r = Relation::identity(k);
            for (i, j) in a.pairs(ag) {
                r.insert(i, j);
                r.insert(j, i);
            }
            while !r.is_transitive() {
                r = r.union(&r.then(&r));
            }
            (ag.clone(), r.pairs())
        })
        .collect();
    crate::syntax::ActionStructure::new(a.name(), a.states().to_vec(), a.designated(), rel, a.preconditions().to_vec())
        .expect("closure keeps the action well formed")
}
