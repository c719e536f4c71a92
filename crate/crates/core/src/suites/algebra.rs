use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{action_is_equivalence, algebra_actions, frame_family, Suite, SuiteConfig, SuiteReport};
use crate::algebra::{
    check_fsa, i_prime, pi, product_algebra, quotient_algebra, AlgebraAction, Elem, Hao, ProductAlgebra, QuotientAlgebra,
    TableAlgebra,
};
use crate::duality::complex_algebra;
use crate::enumerate::rng;
use crate::relational::{Frame, ModelKind};

/// Complex algebras of the frame family together with their actions.
fn instances(
    cfg: &SuiteConfig,
    report: &mut SuiteReport,
    r: &mut ChaCha8Rng,
) -> Vec<(ModelKind, Frame, TableAlgebra, Vec<AlgebraAction>)> {
    let family = frame_family(cfg, &cfg.agents(), &[ModelKind::Ik, ModelKind::Mipc], r, report);
    let mut out = Vec::new();
    for (kind, frame) in family {
        match complex_algebra(&frame) {
            Ok(c) => {
                let acts = algebra_actions(cfg, &c.algebra, kind == ModelKind::Mipc, r);
                out.push((kind, frame, c.algebra, acts));
            }
            Err(e) => report.fail(format!("complex algebra of {:?}: {e}", frame.worlds())),
        }
    }
    out
}

fn describe(frame: &Frame, act: &AlgebraAction) -> String {
    format!("frame {:?} order {:?}, action succ {:?} pre {:?}", frame.worlds(), frame.order().pairs(), act.succ, act.pre)
}

/// The first pair at which `◇ ⊣ ■` or `◆ ⊣ □` fails, using the algebra's own `◆`, `■`.
fn adjunction_failure(alg: &dyn Hao, elems: &[Elem]) -> Option<String> {
    for a in 0..alg.agents().len() {
        let d: Vec<Elem> = elems.iter().map(|x| alg.dia(a, x)).collect();
        let b: Vec<Elem> = elems.iter().map(|x| alg.boxed(a, x)).collect();
        let bd: Vec<Elem> = elems.iter().map(|x| alg.black_dia(a, x)).collect();
        let bb: Vec<Elem> = elems.iter().map(|x| alg.black_box(a, x)).collect();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                if alg.leq(&d[i], y) != alg.leq(x, &bb[j]) {
                    return Some(format!("◇ ⊣ ■ at ({}, {})", alg.label(x), alg.label(y)));
                }
                if alg.leq(&bd[i], y) != alg.leq(x, &b[j]) {
                    return Some(format!("◆ ⊣ □ at ({}, {})", alg.label(x), alg.label(y)));
                }
            }
        }
    }
    None
}

/// `∏ₐ𝔸` and `𝔸ᵃ` are FSAs (MHAs over MIPC frames with equivalence actions) and their
/// lifted tense operators are adjoint.
pub fn verify_algebra_closure(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::AlgebraClosure, cfg);
    let mut r = rng(cfg.random_seed);
    for (kind, frame, alg, acts) in instances(cfg, &mut report, &mut r) {
        let base: Arc<dyn Hao> = Arc::new(alg);
        for act in &acts {
            let prod = product_algebra(base.clone(), act);
            let quot = quotient_algebra(prod.clone());
            let mha = kind == ModelKind::Mipc && action_is_equivalence(act);
            for (label, alg) in [("product", &prod as &dyn Hao), ("quotient", &quot as &dyn Hao)] {
                let (t, elems) = match TableAlgebra::materialize(alg) {
                    Ok(x) => x,
                    Err(e) => {
                        report.fail(format!("{label}: {e} for {}", describe(&frame, act)));
                        continue;
                    }
                };
                let fsa = check_fsa(&t, false);
                report.record(&format!("{label}-fsa"), fsa.holds(), || {
                    format!("{} for {}", fsa.failures().join("; "), describe(&frame, act))
                });
                if mha {
                    let m = check_fsa(&t, true);
                    report.record(&format!("{label}-mha"), m.holds(), || {
                        format!("{} for {}", m.failures().join("; "), describe(&frame, act))
                    });
                }
                let adj = adjunction_failure(alg, &elems);
                report.record(&format!("{label}-adjunctions"), adj.is_none(), || {
                    format!("{} for {}", adj.unwrap_or_default(), describe(&frame, act))
                });
            }
        }
    }
    report.finish()
}

/// The six Heyting identities over all triples; returns the first failing one.
fn heyting_identity_failure(t: &TableAlgebra) -> Option<String> {
    let n = t.len() as u32;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let laws = [
                    t.le(t.m(x, t.i(x, y)), y),
                    t.i(x, t.m(y, z)) == t.m(t.i(x, y), t.i(x, z)),
                    t.le(t.m(x, y), t.i(x, y)),
                    t.i(x, y) == t.i(x, t.m(x, y)),
                    t.i(t.m(x, y), z) == t.i(x, t.i(y, z)),
                    t.m(x, t.i(y, z)) == t.m(x, t.i(t.m(x, y), z)),
                ];
                if let Some(k) = laws.iter().position(|ok| !ok) {
                    return Some(format!("identity {} at ({}, {}, {})", k + 1, t.name(x), t.name(y), t.name(z)));
                }
            }
        }
    }
    None
}

/// Whether each of the three FS1 forms holds on all pairs, per agent.
fn fs1_forms(t: &TableAlgebra, a: usize) -> [bool; 3] {
    let n = t.len() as u32;
    let (d, b) = (|v| t.d(a, v), |v| t.b(a, v));
    let pairs = || (0..n).flat_map(|p| (0..n).map(move |q| (p, q)));
    [
        pairs().all(|(p, q)| t.le(d(t.i(p, q)), t.i(b(p), d(q)))),
        pairs().all(|(p, q)| t.le(t.m(b(p), d(q)), d(t.m(p, q)))),
        pairs().all(|(p, q)| t.le(b(t.i(p, q)), t.i(d(p), d(q)))),
    ]
}

/// The five clauses for `i′` with the quotient operations defined on classes of
/// product elements; the box clause is checked exactly with a trailing `∧ Pre` and,
/// as printed without it, modulo `≡ₐ`.
fn i_prime_failure(p: &ProductAlgebra, q: &QuotientAlgebra, elems: &[Elem]) -> Option<String> {
    let pre = q.pre().clone();
    let ip = |b: &[u32]| i_prime(q, &pi(q, b));
    let cls = |f: &Elem| pi(q, f);
    for b in elems {
        let ib = ip(b);
        for a in 0..p.agents().len() {
            let dia_a = cls(&p.dia(a, &p.meet(b, &pre)));
            if i_prime(q, &dia_a) != p.meet(&p.dia(a, &p.meet(&ib, &pre)), &pre) {
                return Some(format!("clause 4 at {}", p.label(b)));
            }
            let box_a = cls(&p.imp(&pre, &p.boxed(a, &p.imp(&pre, b))));
            let printed = p.imp(&pre, &p.boxed(a, &p.imp(&pre, &ib)));
            if i_prime(q, &box_a) != p.meet(&pre, &printed) || pi(q, &i_prime(q, &box_a)) != pi(q, &printed) {
                return Some(format!("clause 5 at {}", p.label(b)));
            }
            if q.dia(a, &pi(q, b)) != dia_a || q.boxed(a, &pi(q, b)) != box_a {
                return Some(format!("quotient modalities disagree with the class definition at {}", p.label(b)));
            }
        }
        for c in elems {
            let ic = ip(c);
            if ip(&p.join(b, c)) != p.join(&ib, &ic) {
                return Some(format!("clause 1 at ({}, {})", p.label(b), p.label(c)));
            }
            if ip(&p.meet(b, c)) != p.meet(&ib, &ic) {
                return Some(format!("clause 2 at ({}, {})", p.label(b), p.label(c)));
            }
            if ip(&p.imp(b, c)) != p.meet(&pre, &p.imp(&ib, &ic)) {
                return Some(format!("clause 3 at ({}, {})", p.label(b), p.label(c)));
            }
            if q.imp(&pi(q, b), &pi(q, c)) != cls(&p.imp(b, c)) {
                return Some(format!("quotient implication is not the class of b→c at ({}, {})", p.label(b), p.label(c)));
            }
        }
    }
    None
}

/// Heyting identities and the FS1 forms on every complex algebra of the family, and the
/// `i′` clauses for each of its actions.
pub fn verify_identities(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Identities, cfg);
    let mut r = rng(cfg.random_seed);
    for (_, frame, alg, acts) in instances(cfg, &mut report, &mut r) {
        let bad = heyting_identity_failure(&alg);
        report.record("heyting-identities", bad.is_none(), || format!("{} on {:?}", bad.unwrap_or_default(), frame.worlds()));
        for a in 0..alg.agents().len() {
            let forms = fs1_forms(&alg, a);
            report.record("fs1-forms-equivalent", forms[0] == forms[1] && forms[1] == forms[2], || {
                format!("forms {forms:?} on {:?}", frame.worlds())
            });
            report.record("fs1-forms-hold", forms.iter().all(|&x| x), || format!("forms {forms:?} on {:?}", frame.worlds()));
        }
        let base: Arc<dyn Hao> = Arc::new(alg);
        for act in &acts {
            let prod = product_algebra(base.clone(), act);
            let quot = quotient_algebra(prod.clone());
            let elems = prod.elements();
            let bad = i_prime_failure(&prod, &quot, &elems);
            report.record("i-prime-clauses", bad.is_none(), || {
                format!("{} for {}", bad.unwrap_or_default(), describe(&frame, act))
            });
        }
    }
    report.finish()
}
