mod common;

use common::*;
use ieak::enumerate::{random_action, rng, BankConfig, FormulaShape};
use ieak::relational::ModelKind;
use ieak::rewriter::{
    axiom_instance, equivalence_check, normalize, normalize_with, reduce_step, replay, Axiom, NormalizeOptions,
    RewriteError, Strategy,
};
use ieak::syntax::{parse_formula, ActionStructure, Env, Formula};
use rand::Rng;

fn small_bank() -> BankConfig {
    BankConfig { max_worlds: 2, samples_per_size: 60, max_valuations: 8, ..BankConfig::default() }
}

fn p(env: &Env, s: &str) -> Formula {
    parse_formula(s, env).unwrap()
}

#[test]
fn single_steps() {
    let env = cards_env();
    let (f, step) = reduce_step(&env, &p(&env, "<alpha> Gc")).unwrap().unwrap();
    assert_eq!(f, p(&env, "Ga & Gc"));
    assert_eq!(step.axiom, Axiom::DiaAtom);
    assert!(step.path.is_empty());

    let (f, step) = reduce_step(&env, &p(&env, "[alpha](Gb -> Gc)")).unwrap().unwrap();
    assert_eq!(f, p(&env, "<alpha> Gb -> <alpha> Gc"));
    assert_eq!(step.axiom, Axiom::BoxImp);

    let (f, _) = reduce_step(&env, &p(&env, "<alpha> dia c Gb")).unwrap().unwrap();
    assert_eq!(f, p(&env, "Ga & (dia c <alpha> Gb | dia c <alpha@l> Gb)"));
    let (f, _) = reduce_step(&env, &p(&env, "<alpha> dia a Gb")).unwrap().unwrap();
    assert_eq!(f, p(&env, "Ga & dia a <alpha> Gb"));
    let (f, _) = reduce_step(&env, &p(&env, "[alpha@l] box a Gb")).unwrap().unwrap();
    assert_eq!(f, p(&env, "Wa -> box a [alpha@l] Gb"));
}

#[test]
fn constants() {
    let env = cards_env();
    let (f, t) = normalize(&env, &p(&env, "<alpha> true")).unwrap();
    assert_eq!(f, atom("Ga"));
    assert_eq!(t.steps[0].axiom, Axiom::DiaTop);
    assert_eq!(normalize(&env, &p(&env, "[alpha] true")).unwrap().0, Formula::top());
    assert_eq!(normalize(&env, &p(&env, "[alpha] false")).unwrap().0, p(&env, "~Ga"));
    assert_eq!(normalize(&env, &p(&env, "<alpha> false")).unwrap().0, Formula::Bot);
}

#[test]
fn static_formulas_unchanged() {
    let env = cards_env();
    let f = p(&env, "box a (Ga -> dia b Wc) | ~Gb");
    let (g, t) = normalize(&env, &f).unwrap();
    assert_eq!(g, f);
    assert!(t.is_empty());
    assert!(reduce_step(&env, &f).unwrap().is_none());
}

#[test]
fn empty_successors_give_constants() {
    let act = ActionStructure::from_labels("lonely", &["s"], "s", &[("a", &[])], &[("s", atom("q"))]).unwrap();
    let env = Env::with_actions(agents(&["a"]), [act]).unwrap();
    assert_eq!(normalize(&env, &p(&env, "<lonely> dia a p")).unwrap().0, p(&env, "q & false"));
    assert_eq!(normalize(&env, &p(&env, "[lonely] box a p")).unwrap().0, p(&env, "q -> true"));
}

#[test]
fn cards_hand_expansion() {
    let env = cards_env();
    let goal = p(&env, "[alpha][beta] box c Ga");
    let (nf, trace) = normalize(&env, &goal).unwrap();
    assert!(nf.is_static());
    assert_eq!(replay(&env, &goal, &trace).unwrap(), nf);
    let pre_b = "((Ga -> box a Ga) & (Gb -> box a Gb) & (Gc -> box a Gc))";
    let hand = format!(
        "<alpha> {pre_b} -> (Ga & (box c (<alpha> {pre_b} -> <alpha> Ga) & box c (<alpha@l> {pre_b} -> <alpha@l> Ga)))"
    );
    let hand = p(&env, &hand);
    let bank = BankConfig { max_worlds: 3, samples_per_size: 100, max_valuations: 4, ..BankConfig::default() };
    let v = equivalence_check(&env, &nf, &hand, &bank).unwrap();
    assert!(v.equivalent, "{:?}", v.countermodel);
    let v = equivalence_check(&env, &goal, &hand, &bank).unwrap();
    assert!(v.equivalent);
    assert!(v.coverage.models > 1000);
}

#[test]
fn double_negation_countermodel() {
    let env = Env::new(agents(&["a"]));
    let v = equivalence_check(&env, &atom("p"), &p(&env, "~~p"), &small_bank()).unwrap();
    assert!(!v.equivalent);
    let c = v.countermodel.unwrap();
    assert_eq!(c.kind, ModelKind::Ik);
    assert_eq!(c.worlds.len(), 2);
    assert_eq!(c.order.len(), 3);
    assert!(c.left.len() < c.right.len());
    let v = equivalence_check(&env, &atom("p"), &atom("p"), &small_bank()).unwrap();
    assert!(v.equivalent);
    assert!(v.coverage.is_exhaustive());
}

#[test]
fn every_axiom_instance_is_equivalent() {
    let ags = agents(&["a", "b"]);
    let mut r = rng(17);
    let shape = FormulaShape::static_over(&["p", "q"], &ags, 2);
    for axiom in Axiom::ALL {
        for _ in 0..3 {
            let act = random_action(&mut r, "alpha", &ags, 2, &[atom("p"), atom("q")]);
            let env = Env::with_actions(ags.clone(), [act.clone()]).unwrap();
            let point = act.states()[r.gen_range(0..act.len())].clone();
            let rf = ieak::syntax::ActionRef::at("alpha", point);
            let (phi, psi) = (shape.sample(&mut r, 2), shape.sample(&mut r, 2));
            let phi = if matches!(axiom, Axiom::DiaAtom | Axiom::BoxAtom) { atom("p") } else { phi };
            let (lhs, rhs) = axiom_instance(&env, axiom, &rf, &phi, &psi, "b").unwrap();
            let v = equivalence_check(&env, &lhs, &rhs, &small_bank()).unwrap();
            assert!(v.equivalent, "{axiom}: {lhs} vs {rhs}: {:?}", v.countermodel);
        }
    }
}

fn random_env(r: &mut impl Rng) -> (Env, FormulaShape) {
    let ags = agents(&["a", "b"]);
    let a1 = random_action(r, "alpha", &ags, 2, &[atom("p"), atom("q"), Formula::top()]);
    let a2 = random_action(r, "beta", &ags, 2, &[atom("p"), Formula::dia("a", atom("q"))]);
    let env = Env::with_actions(ags.clone(), [a1.clone(), a2.clone()]).unwrap();
    let shape = FormulaShape::static_over(&["p", "q"], &ags, 4).with_actions(&[a1, a2], 2);
    (env, shape)
}

#[test]
fn normal_forms_are_static_and_sound() {
    let mut r = rng(23);
    let bank = BankConfig { max_worlds: 2, samples_per_size: 30, max_valuations: 4, ..BankConfig::default() };
    for _ in 0..15 {
        let (env, shape) = random_env(&mut r);
        let f = shape.sample(&mut r, 4);
        let (nf, trace) = normalize(&env, &f).unwrap();
        assert!(nf.is_static());
        assert_eq!(replay(&env, &f, &trace).unwrap(), nf);
        assert!(equivalence_check(&env, &f, &nf, &bank).unwrap().equivalent, "{f}");
        let (other, _) =
            normalize_with(&env, &f, NormalizeOptions { strategy: Strategy::RightmostInnermost, ..Default::default() })
                .unwrap();
        assert!(equivalence_check(&env, &nf, &other, &bank).unwrap().equivalent, "{f}");
    }
}

#[test]
fn each_step_is_sound() {
    let mut r = rng(29);
    let bank = BankConfig { max_worlds: 2, samples_per_size: 10, max_valuations: 4, ..BankConfig::default() };
    for _ in 0..4 {
        let (env, shape) = random_env(&mut r);
        let f = shape.sample(&mut r, 3);
        let (_, trace) = normalize(&env, &f).unwrap();
        for step in &trace.steps {
            let before = p(&env, &step.before);
            let after = p(&env, &step.after);
            assert!(equivalence_check(&env, &before, &after, &bank).unwrap().equivalent, "{}", step.axiom);
        }
    }
}

#[test]
fn size_bound_for_one_action() {
    let mut r = rng(31);
    let ags = agents(&["a", "b"]);
    let shape = FormulaShape::static_over(&["p", "q"], &ags, 4);
    for _ in 0..200 {
        let act = random_action(&mut r, "alpha", &ags, 3, &[atom("p"), Formula::dia("a", atom("q")), Formula::top()]);
        let env = Env::with_actions(ags.clone(), [act.clone()]).unwrap();
        let phi = shape.sample(&mut r, 4);
        let pmax = act.preconditions().iter().map(Formula::size).max().unwrap();
        for f in [Formula::dyn_dia("alpha", phi.clone()), Formula::dyn_box("alpha", phi.clone())] {
            let (nf, _) = normalize(&env, &f).unwrap();
            let bound = (pmax + 3) * phi.size() * act.len().pow(phi.modal_depth() as u32);
            assert!(nf.size() <= bound, "{f}: {} > {bound}", nf.size());
        }
    }
}

#[test]
fn step_limit_is_reported() {
    let env = cards_env();
    let f = p(&env, "[alpha][beta] box c Ga");
    let r = normalize_with(&env, &f, NormalizeOptions { max_steps: 2, ..Default::default() });
    assert_eq!(r, Err(RewriteError::StepLimit(2)));
}
