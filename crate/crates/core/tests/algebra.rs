mod common;

use std::sync::Arc;

use common::*;
use ieak::algebra::{
    check_fsa, check_heyting, heyting_implies, i_prime, pi, pi_k, product_algebra, quotient_algebra, tense_adjoints,
    AlgebraAction, Elem, Hao, Law, TableAlgebra,
};
use ieak::duality::{algebra_isomorphism, complex_algebra, update_frame};
use ieak::relational::{Frame, Relation};
use smallvec::smallvec;

fn e(i: u32) -> Elem {
    smallvec![i]
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// 0 < m < 1 with one agent.
fn chain3(dia: Vec<u32>, boxt: Vec<u32>) -> TableAlgebra {
    TableAlgebra::from_order(names(&["0", "m", "1"]), &[(0, 1), (1, 2)], agents(&["a"]), vec![dia], vec![boxt]).unwrap()
}

/// Subsets of {p, q} as bitmasks 0..4.
fn boolean4(dia: Vec<u32>, boxt: Vec<u32>) -> TableAlgebra {
    let order: Vec<(usize, usize)> = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|&(x, y)| x & y == x).collect();
    TableAlgebra::from_order(names(&["{}", "{p}", "{q}", "{p,q}"]), &order, agents(&["a"]), vec![dia], vec![boxt]).unwrap()
}

fn ident(n: u32) -> Vec<u32> {
    (0..n).collect()
}

#[test]
fn chain_implication() {
    let t = chain3(ident(3), ident(3));
    // x∧1 ≤ m with meet = min on 0 < 1 < 2
    let oracle = (0..3u32).filter(|&x| x.min(2) <= 1).max().unwrap();
    assert_eq!(heyting_implies(t.lattice(), 2, 1).unwrap(), oracle);
    assert_eq!(t.i(2, 1), 1);
    for y in 0..3 {
        assert_eq!(t.i(y, 2), 2);
    }
}

#[test]
fn boolean_implication_is_material() {
    let t = boolean4(ident(4), ident(4));
    for y in 0..4u32 {
        for z in 0..4u32 {
            assert_eq!(t.i(y, z), (!y & 3) | z, "{y} -> {z}");
        }
    }
    assert!(check_heyting(&t).is_none());
}

#[test]
fn non_lattice_rejected() {
    // two incomparable maximal elements
    let r = TableAlgebra::from_order(names(&["0", "x", "y"]), &[(0, 1), (0, 2)], vec![], vec![], vec![]);
    assert!(r.is_err());
}

#[test]
fn boolean_identity_is_mha() {
    let t = boolean4(ident(4), ident(4));
    assert!(check_fsa(&t, false).holds());
    assert!(check_fsa(&t, true).holds());
}

#[test]
fn chain_report_matches_scan() {
    let t = chain3(vec![0, 2, 2], vec![2, 2, 2]);
    let report = check_fsa(&t, false);
    let imp = |x: u32, y: u32| if x <= y { 2 } else { y };
    let d = |x: u32| if x == 0 { 0 } else { 2 };
    let b = |_: u32| 2u32;
    let pairs: Vec<(u32, u32)> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
    let box_normal = b(2) == 2
        && pairs.iter().all(|&(x, y)| b(x.min(y)) == b(x).min(b(y)) && b(imp(x, y)) <= imp(b(x), b(y)));
    let dia_normal = d(0) == 0 && pairs.iter().all(|&(x, y)| d(x.max(y)) == d(x).max(d(y)));
    let fs1 = pairs.iter().all(|&(x, y)| d(imp(x, y)) <= imp(b(x), d(y)));
    let fs2 = pairs.iter().all(|&(x, y)| imp(d(x), b(y)) <= b(imp(x, y)));
    assert_eq!(report.verdict("a", Law::BoxNormal), Some(box_normal));
    assert_eq!(report.verdict("a", Law::DiaNormal), Some(dia_normal));
    assert_eq!(report.verdict("a", Law::Fs1), Some(fs1));
    assert_eq!(report.verdict("a", Law::Fs2), Some(fs2));
    assert!(!fs1);
    assert!(!report.holds());
}

#[test]
fn tense_of_identity() {
    let t = tense_adjoints(&boolean4(ident(4), ident(4))).unwrap();
    for x in 0..4 {
        assert_eq!(t.bb(0, x), x);
        assert_eq!(t.bd(0, x), x);
    }
}

#[test]
fn tense_rejects_non_normal() {
    let t = chain3(vec![2, 2, 2], ident(3));
    assert!(tense_adjoints(&t).is_err());
}

fn classical_frame(n: usize, pairs: &[(usize, usize)]) -> Frame {
    let worlds = (0..n).map(|i| format!("w{i}")).collect();
    Frame::discrete(worlds, agents(&["a"]), vec![Relation::from_pairs(n, pairs.iter().copied())]).unwrap()
}

#[test]
fn black_diamond_is_forward_image() {
    let f = classical_frame(3, &[(0, 1), (1, 2), (2, 2)]);
    let c = complex_algebra(&f).unwrap();
    let t = tense_adjoints(&c.algebra).unwrap();
    for x in 0..t.len() as u32 {
        let s = c.set(x);
        let mut img = f.empty_set();
        for u in 0..3 {
            for v in 0..3 {
                if s.contains(u) && [(0, 1), (1, 2), (2, 2)].contains(&(u, v)) {
                    img.insert(v);
                }
            }
        }
        assert_eq!(c.set(t.bd(0, x)), &img);
    }
    assert_eq!(t.bb(0, t.lattice().top()), t.lattice().top());
}

fn action(k: usize, pairs: &[(usize, usize)], pre: Vec<Elem>) -> AlgebraAction {
    let succ = vec![(0..k).map(|i| pairs.iter().filter(|p| p.0 == i).map(|p| p.1).collect()).collect()];
    AlgebraAction::from_parts("act", (0..k).map(|j| format!("s{j}")).collect(), 0, succ, pre).unwrap()
}

#[test]
fn singleton_identity_product_is_base() {
    let base = Arc::new(chain3(vec![0, 2, 2], vec![2, 2, 2]));
    let p = product_algebra(base.clone(), &action(1, &[(0, 0)], vec![e(2)]));
    let (t, _) = TableAlgebra::materialize(&p).unwrap();
    assert!(algebra_isomorphism(&t, &base).unwrap().is_some());
}

#[test]
fn no_successor_gives_bottom_and_top() {
    let base = Arc::new(boolean4(ident(4), ident(4)));
    let p = product_algebra(base.clone(), &action(2, &[(0, 1)], vec![e(3), e(3)]));
    for f in p.elements() {
        assert_eq!(p.coord(&p.dia(0, &f), 1), &[0]);
        assert_eq!(p.coord(&p.boxed(0, &f), 1), &[3]);
        assert_eq!(p.coord(&p.dia(0, &f), 0), p.coord(&f, 1));
    }
}

#[test]
fn product_matches_coproduct_complex_algebra() {
    let f = classical_frame(2, &[(0, 1), (1, 1)]);
    let c = complex_algebra(&f).unwrap();
    let base: Arc<dyn Hao> = Arc::new(c.algebra.clone());
    let top = base.top();
    let act = action(2, &[(0, 0), (0, 1), (1, 0), (1, 1)], vec![top.clone(), top]);
    let p = product_algebra(base, &act);
    let co = update_frame(&f, &act.states, &act.succ, &[f.full_set(), f.full_set()]).unwrap();
    let cc = complex_algebra(&co).unwrap();
    let to_set = |g: &[u32]| {
        let mut s = co.empty_set();
        for j in 0..2 {
            for w in c.set(p.coord(g, j)[0]).ones() {
                s.insert(j * 2 + w);
            }
        }
        s
    };
    for g in p.elements() {
        let s = to_set(&g);
        assert_eq!(to_set(&p.dia(0, &g)), co.dia(0, &s));
        assert_eq!(to_set(&p.boxed(0, &g)), co.boxed(0, &s));
        assert_eq!(to_set(&p.black_dia(0, &g)), *cc.set(tense_adjoints(&cc.algebra).unwrap().bd(0, cc.element(&s).unwrap())));
    }
}

#[test]
fn quotient_extremes() {
    let base: Arc<dyn Hao> = Arc::new(boolean4(ident(4), ident(4)));
    let all = product_algebra(base.clone(), &action(2, &[(0, 1), (1, 0)], vec![e(3), e(3)]));
    let q = quotient_algebra(all.clone());
    assert_eq!(q.size(), all.size());
    let (tq, _) = TableAlgebra::materialize(&q).unwrap();
    let (tp, _) = TableAlgebra::materialize(&all).unwrap();
    assert!(algebra_isomorphism(&tq, &tp).unwrap().is_some());

    let none = quotient_algebra(product_algebra(base, &action(2, &[(0, 1)], vec![e(0), e(0)])));
    assert_eq!(none.size(), Some(1));
    assert_eq!(none.elements().len(), 1);
}

#[test]
fn canonical_representatives() {
    let base: Arc<dyn Hao> = Arc::new(chain3(vec![0, 2, 2], vec![2, 2, 2]));
    let q = quotient_algebra(product_algebra(base, &action(2, &[(0, 0), (0, 1), (1, 1)], vec![e(1), e(2)])));
    let p = q.product();
    let pre = q.pre().clone();
    assert_eq!(i_prime(&q, &pre), pre);
    assert_eq!(i_prime(&q, &q.top()), pre);
    for f in p.elements() {
        assert_eq!(pi(&q, &f), pi(&q, &p.meet(&f, &pre)));
        assert_eq!(pi(&q, &p.imp(&pre, &f)), pi(&q, &f));
        assert_eq!(pi(&q, &i_prime(&q, &pi(&q, &f))), pi(&q, &f));
    }
    assert_eq!(pi_k(p, &pre, 0).as_slice(), &[1]);
    assert_eq!(pi_k(p, &p.constant(&[2]), 1).as_slice(), &[2]);
    // one representative per class
    let reps = q.elements();
    let classes: std::collections::BTreeSet<Elem> = p.elements().iter().map(|f| pi(&q, f)).collect();
    assert_eq!(classes.len(), reps.len());
}

#[test]
fn cards_quotient_is_updated_complex_algebra() {
    let m = cards_model();
    let f = m.frame();
    let c = complex_algebra(f).unwrap();
    let base: Arc<dyn Hao> = Arc::new(c.algebra.clone());
    let alpha = cards_alpha();
    let pre_sets = vec![m.val("Ga").unwrap().clone(), m.val("Wa").unwrap().clone()];
    let pre = pre_sets.iter().map(|s| c.elem(s).unwrap()).collect();
    let act = AlgebraAction::new(base.as_ref(), &alpha, pre).unwrap();
    let q = quotient_algebra(product_algebra(base, &act));
    let (tq, _) = TableAlgebra::materialize(&q).unwrap();
    let fa = update_frame(f, &act.states, &act.succ, &pre_sets).unwrap();
    assert_eq!(fa.len(), 3);
    let ca = complex_algebra(&fa).unwrap();
    assert_eq!(tq.len(), 8);
    assert!(algebra_isomorphism(&tq, &ca.algebra).unwrap().is_some());
    assert!(check_fsa(&tq, false).holds());
}
