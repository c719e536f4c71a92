mod common;

use std::collections::BTreeMap;

use common::*;
use fixedbitset::FixedBitSet;
use ieak::relational::{
    check_ik_frame, coproduct_model, eval, eval_classical, eval_ik, product_update, Frame, Model, ModelKind,
    Relation, Violation,
};
use ieak::syntax::{parse_formula, ActionStructure, Env, Formula};

fn names(m: &Model, s: &FixedBitSet) -> Vec<String> {
    m.frame().set_names(s)
}

fn edge(m: &Model, agent: &str, x: &str, y: &str) -> bool {
    let f = m.frame();
    let i = f.agent_index(&agent.into()).unwrap();
    f.relation(i).contains(f.world_index(x).unwrap(), f.world_index(y).unwrap())
}

#[test]
fn green_card_world() {
    let m = cards_model();
    let env = cards_env();
    assert_eq!(names(&m, &eval_classical(&m, &env, &atom("Ga")).unwrap()), vec!["Ga"]);
    assert_eq!(eval_classical(&m, &env, &Formula::top()).unwrap().count_ones(..), 3);
}

#[test]
fn coproduct_of_cards() {
    let m = cards_model();
    let inter = coproduct_model(&m, &cards_alpha()).unwrap();
    assert_eq!(inter.len(), 6);
    assert!(edge(&inter, "c", "(Ga,k)", "(Gb,l)"));
    assert!(edge(&inter, "c", "(Gb,k)", "(Ga,l)"));
    assert!(!edge(&inter, "a", "(Gb,k)", "(Gc,l)"));
    assert!(edge(&inter, "a", "(Gb,l)", "(Gc,l)"));
}

#[test]
fn cards_updates() {
    let m = cards_model();
    let env = cards_env();
    let (ma, trace) = product_update(&m, &env, "alpha").unwrap();
    assert_eq!(trace.intermediate.len(), 6);
    let mut worlds = ma.frame().worlds().to_vec();
    worlds.sort();
    assert_eq!(worlds, vec!["(Ga,k)", "(Gb,l)", "(Gc,l)"]);
    assert!(edge(&ma, "c", "(Ga,k)", "(Gb,l)"));
    assert!(edge(&ma, "c", "(Gb,l)", "(Ga,k)"));
    assert!(edge(&ma, "a", "(Gb,l)", "(Gc,l)"));
    assert!(!edge(&ma, "c", "(Gb,l)", "(Gc,l)"));
    assert!(!edge(&ma, "b", "(Gb,l)", "(Gc,l)"));
    assert!(!edge(&ma, "c", "(Ga,k)", "(Gc,l)"));

    let env2 = Env::with_actions(common::agents(&["a", "b", "c"]), [cards_beta()]).unwrap();
    let (mab, _) = product_update(&ma, &env2, "beta").unwrap();
    assert_eq!(mab.len(), 1);
    assert_eq!(mab.frame().worlds(), &["((Ga,k),s)".to_string()]);
    assert_eq!(eval(&mab, &env2, &atom("Ga")).unwrap().count_ones(..), 1);
}

#[test]
fn b_learns_the_card() {
    let m = cards_model();
    let env = cards_env();
    let f = parse_formula("<alpha> box b Ga", &env).unwrap();
    let got = eval_classical(&m, &env, &f).unwrap();

    // Hand-built M^alpha: (Ga,k), (Gb,l), (Gc,l); b only has loops there.
    let worlds = vec!["(Ga,k)".to_string(), "(Gb,l)".into(), "(Gc,l)".into()];
    let rb = Relation::identity(3);
    let frame = Frame::discrete(worlds, common::agents(&["b"]), vec![rb]).unwrap();
    let mut val = BTreeMap::new();
    val.insert("Ga".to_string(), set(3, &[0]));
    let hand = Model::new(ModelKind::Classical, frame, val).unwrap();
    let inner = eval_classical(&hand, &Env::default(), &Formula::boxed("b", atom("Ga"))).unwrap();
    // Only (Ga,k) lies over the designated state k, and Ga holds at world index 1 of M.
    let mut expected = FixedBitSet::with_capacity(3);
    if inner.contains(0) {
        expected.insert(1);
    }
    assert_eq!(got, expected);
    assert_eq!(names(&m, &got), vec!["Ga"]);
}

#[test]
fn nested_cards_formula() {
    let m = cards_model();
    let env = cards_env();
    let f = parse_formula("<alpha><beta> box c Ga", &env).unwrap();
    assert_eq!(names(&m, &eval(&m, &env, &f).unwrap()), vec!["Ga"]);
}

fn naive_compose(n: usize, r: &Relation, s: &Relation) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..n {
        for z in 0..n {
            if (0..n).any(|y| r.contains(x, y) && s.contains(y, z)) {
                out.push((x, z));
            }
        }
    }
    out
}

#[test]
fn two_chain_frame_conditions() {
    let le = Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
    let ge = le.inverse();
    let r = Relation::from_pairs(2, [(1, 1)]);
    let frame = Frame::new(vec!["x".into(), "y".into()], le.clone(), common::agents(&["a"]), vec![r.clone()]).unwrap();
    let report = check_ik_frame(&frame, ModelKind::Ik);

    let subset = |a: &[(usize, usize)], b: &[(usize, usize)]| a.iter().all(|p| b.contains(p));
    let c1 = subset(&naive_compose(2, &r, &ge), &naive_compose(2, &ge, &r));
    let c2 = subset(&naive_compose(2, &le, &r), &naive_compose(2, &r, &le));
    let a = naive_compose(2, &ge, &r);
    let b = naive_compose(2, &r, &le);
    let inter: Vec<_> = a.iter().filter(|p| b.contains(p)).copied().collect();
    let c3 = inter == r.pairs();

    let has = |pred: fn(&Violation) -> bool| report.violations.iter().any(pred);
    assert_eq!(!c1, has(|v| matches!(v, Violation::ForthDown { .. })));
    assert_eq!(!c2, has(|v| matches!(v, Violation::BackUp { .. })));
    assert_eq!(!c3, has(|v| matches!(v, Violation::Sandwich { .. })));
    assert!(!report.is_valid());
}

#[test]
fn discrete_frames_are_ik() {
    for mask in 0..512u64 {
        let r = Relation::from_mask(3, mask);
        let frame = Frame::discrete(vec!["u".into(), "v".into(), "w".into()], common::agents(&["a"]), vec![r]).unwrap();
        assert!(check_ik_frame(&frame, ModelKind::Ik).is_valid());
    }
}

#[test]
fn order_axioms_reported() {
    let le = Relation::from_pairs(2, [(0, 1), (1, 0), (0, 0)]);
    let frame = Frame::new(vec!["x".into(), "y".into()], le, vec![], vec![]).unwrap();
    let report = check_ik_frame(&frame, ModelKind::Ik);
    assert!(report.violations.iter().any(|v| matches!(v, Violation::OrderNotReflexive { .. })));
    assert!(report.violations.iter().any(|v| matches!(v, Violation::OrderNotAntisymmetric { .. })));
}

fn two_chain_model() -> Model {
    let le = Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
    let frame = Frame::new(vec!["x".into(), "y".into()], le, common::agents(&["a"]), vec![Relation::empty(2)]).unwrap();
    let mut val = BTreeMap::new();
    val.insert("p".to_string(), set(2, &[0]));
    Model::new(ModelKind::Ik, frame, val).unwrap()
}

#[test]
fn intuitionistic_negation() {
    let m = two_chain_model();
    let env = Env::default();
    let np = eval_ik(&m, &env, &parse_formula("~p", &env).unwrap()).unwrap();
    let nnp = eval_ik(&m, &env, &parse_formula("~~p", &env).unwrap()).unwrap();
    assert_eq!(np.count_ones(..), 0);
    assert_eq!(names(&m, &nnp), vec!["x", "y"]);
    assert_eq!(eval_ik(&m, &env, &Formula::Bot).unwrap().count_ones(..), 0);
}

#[test]
fn non_downset_valuation_rejected() {
    let le = Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
    let frame = Frame::new(vec!["x".into(), "y".into()], le, vec![], vec![]).unwrap();
    let mut val = BTreeMap::new();
    val.insert("p".to_string(), set(2, &[1]));
    assert!(Model::new(ModelKind::Ik, frame, val).is_err());
}

#[test]
fn discrete_implication_is_boolean() {
    let m = cards_model().with_kind(ModelKind::Ik).unwrap();
    let env = Env::default();
    for (x, y) in [("Ga", "Gb"), ("Wa", "Gb"), ("Ga", "Wa")] {
        let got = eval_ik(&m, &env, &Formula::imp(atom(x), atom(y))).unwrap();
        let mut want = m.val(x).unwrap().clone();
        want.toggle_range(..);
        want.union_with(m.val(y).unwrap());
        assert_eq!(got, want);
    }
}

#[test]
fn trivial_preconditions_keep_everything() {
    let m = cards_model();
    let mut alpha = cards_alpha();
    alpha = ActionStructure::new(
        "alpha",
        alpha.states().to_vec(),
        0,
        m.frame().agents().iter().map(|a| (a.clone(), alpha.pairs(a))).collect(),
        vec![Formula::top(), Formula::top()],
    )
    .unwrap();
    let env = Env::with_actions(common::agents(&["a", "b", "c"]), [alpha.clone()]).unwrap();
    let (ma, trace) = product_update(&m, &env, "alpha").unwrap();
    assert_eq!(&ma, &trace.intermediate);
}

#[test]
fn singleton_identity_action_copies_model() {
    let m = cards_model();
    let id = ActionStructure::from_labels(
        "id",
        &["s"],
        "s",
        &[("a", &[("s", "s")]), ("b", &[("s", "s")]), ("c", &[("s", "s")])],
        &[("s", Formula::top())],
    )
    .unwrap();
    let inter = coproduct_model(&m, &id).unwrap();
    for (i, _) in m.frame().agents().iter().enumerate() {
        assert_eq!(inter.frame().relation(i), m.frame().relation(i));
    }
    assert_eq!(inter.valuation(), m.valuation());
}

#[test]
fn empty_relation_stays_empty() {
    let frame = Frame::discrete(vec!["u".into(), "v".into()], common::agents(&["a"]), vec![Relation::empty(2)]).unwrap();
    let m = Model::new(ModelKind::Classical, frame, BTreeMap::new()).unwrap();
    let act = ActionStructure::from_labels(
        "t",
        &["k", "l"],
        "k",
        &[("a", &[("k", "k"), ("k", "l"), ("l", "k"), ("l", "l")])],
        &[("k", Formula::top()), ("l", Formula::top())],
    )
    .unwrap();
    let inter = coproduct_model(&m, &act).unwrap();
    assert!(inter.frame().relation(0).is_empty());
}

#[test]
fn empty_update_is_legal() {
    let m = cards_model();
    let act = ActionStructure::from_labels(
        "never",
        &["s"],
        "s",
        &[("a", &[("s", "s")]), ("b", &[("s", "s")]), ("c", &[("s", "s")])],
        &[("s", Formula::Bot)],
    )
    .unwrap();
    let env = Env::with_actions(common::agents(&["a", "b", "c"]), [act]).unwrap();
    let (u, _) = product_update(&m, &env, "never").unwrap();
    assert!(u.is_empty());
    let f = parse_formula("[never] false", &env).unwrap();
    assert_eq!(eval(&m, &env, &f).unwrap().count_ones(..), 3);
    let g = parse_formula("<never> true", &env).unwrap();
    assert_eq!(eval(&m, &env, &g).unwrap().count_ones(..), 0);
}

#[test]
fn unknown_names_are_errors() {
    let m = cards_model();
    let env = cards_env();
    assert!(eval(&m, &env, &atom("zz")).is_err());
    assert!(eval(&m, &env, &Formula::boxed("d", atom("Ga"))).is_err());
}
