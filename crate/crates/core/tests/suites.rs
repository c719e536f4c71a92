use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use ieak::relational::{Frame, Model, ModelKind, Relation};
use ieak::suites::{
    cards_hypotheses, example_regression, run_suite, verify_cards, verify_frames, CardsFixture, CardsVerdict, Suite,
    SuiteConfig, SuiteError,
};
use ieak::syntax::Agent;

fn small(suite: Suite) -> SuiteConfig {
    SuiteConfig { max_worlds: 2, max_agents: 1, sample_count: 10, ..SuiteConfig::for_suite(suite) }
}

#[test]
fn every_suite_passes_at_small_bounds() {
    for suite in Suite::ALL {
        let cfg = match suite {
            Suite::Cards => SuiteConfig { max_worlds: 2, sample_count: 20, ..SuiteConfig::for_suite(suite) },
            _ => small(suite),
        };
        let report = run_suite(suite, &cfg).unwrap();
        assert!(report.passed, "{suite}: {:?}", report.failures);
        assert!(report.total_checks() > 0, "{suite}");
    }
}

#[test]
fn suite_names_round_trip() {
    for suite in Suite::ALL {
        assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
    }
    assert!(matches!("nonsense".parse::<Suite>(), Err(SuiteError::UnknownSuite(_))));
}

#[test]
fn bounds_are_enforced() {
    let cfg = SuiteConfig { max_worlds: 5, ..SuiteConfig::default() };
    assert!(matches!(cfg.validate(), Err(SuiteError::Bound { name: "maxWorlds", .. })));
    let cfg = SuiteConfig { sample_count: 0, ..SuiteConfig::default() };
    assert!(cfg.validate().is_err());
    assert!(run_suite(Suite::Frames, &SuiteConfig { max_agents: 9, ..SuiteConfig::default() }).is_err());
}

#[test]
fn reports_are_deterministic() {
    let cfg = small(Suite::Agreement);
    let a = run_suite(Suite::Agreement, &cfg).unwrap();
    let b = run_suite(Suite::Agreement, &cfg).unwrap();
    assert_eq!(a.checks, b.checks);
    assert_eq!(a.notes, b.notes);
}

#[test]
fn broken_fixture_fails_the_frame_suite() {
    // w0 ≤ w1 with an `a`-loop only at the top.
    let mut order = Relation::identity(2);
    order.insert(0, 1);
    let mut rel = Relation::empty(2);
    rel.insert(1, 1);
    let frame = Frame::new(vec!["w0".into(), "w1".into()], order, vec!["a".into()], vec![rel]).unwrap();
    let report = verify_frames(&small(Suite::Frames), &[("broken".into(), frame, ModelKind::Ik)]);
    assert!(!report.passed);
    assert!(report.failures.iter().any(|f| f.contains("broken") && f.contains("fails at")), "{:?}", report.failures);
}

#[test]
fn example_figures() {
    let ex = example_regression(&CardsFixture::builtin()).unwrap();
    assert!(ex.passed, "{:?}", ex.checks);
    assert_eq!(ex.intermediate_worlds, 6);
    assert_eq!(ex.updated_worlds, ["(Ga,k)", "(Gb,l)", "(Gc,l)"]);
    assert_eq!(ex.final_worlds.len(), 1);
}

fn agents() -> Vec<Agent> {
    vec!["a".into(), "b".into(), "c".into()]
}

#[test]
fn cards_model_holds() {
    let fx = CardsFixture::builtin();
    let env = fx.env().unwrap();
    let verdict = ieak::suites::cards_check_model(&env, &cards_hypotheses(&agents()), &fx.model).unwrap();
    // E(other?) holds at every world of the initial model.
    assert_eq!(verdict, CardsVerdict::Holds { premise_worlds: 3 });
}

#[test]
fn model_violating_aut_is_skipped() {
    let fx = CardsFixture::builtin();
    let env = fx.env().unwrap();
    let frame = fx.model.frame().clone();
    let mut val: BTreeMap<String, FixedBitSet> = fx.model.valuation().clone();
    let mut two = FixedBitSet::with_capacity(3);
    two.insert_range(0..2);
    val.insert("Ga".into(), two);
    let model = Model::new(ModelKind::Classical, frame, val).unwrap();
    let verdict = ieak::suites::cards_check_model(&env, &cards_hypotheses(&agents()), &model).unwrap();
    assert_eq!(verdict, CardsVerdict::Skipped);
}

#[test]
fn premise_excludes_the_failing_world() {
    // With `a` seeing only its own world, beta keeps (Gb,l) and `c` still confuses it with (Ga,k).
    let fx = CardsFixture::builtin();
    let env = fx.env().unwrap();
    let f = fx.model.frame();
    let mut rels = f.relations().to_vec();
    rels[0] = Relation::identity(3);
    let frame = Frame::discrete(f.worlds().to_vec(), f.agents().to_vec(), rels).unwrap();
    let model = Model::new(ModelKind::Classical, frame, fx.model.valuation().clone()).unwrap();
    let h = cards_hypotheses(&agents());
    let mut ev = ieak::relational::Evaluator::new(&model, &env);
    let goal = ev.eval(&h.goal).unwrap();
    assert_eq!(model.frame().set_names(&goal), ["Gb", "Gc"]);
    let verdict = ieak::suites::cards_check_model(&env, &h, &model).unwrap();
    assert_eq!(verdict, CardsVerdict::Holds { premise_worlds: 0 });
}

#[test]
fn cards_suite_small() {
    let cfg = SuiteConfig { max_worlds: 2, sample_count: 30, ..SuiteConfig::for_suite(Suite::Cards) };
    let report = verify_cards(&cfg, &CardsFixture::builtin());
    assert!(report.passed, "{:?}", report.failures);
    // 1 world: 3 valuations × 2³ relation triples; 2 worlds: 9 valuations × (2⁴)³.
    assert_eq!(report.checks["classical-exhaustive-models"], 3 * 8 + 9 * 4096);
}
