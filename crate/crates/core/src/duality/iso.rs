use std::collections::BTreeMap;

use serde::Serialize;

use super::DualityError;
use crate::algebra::TableAlgebra;
use crate::relational::{Frame, Model, Relation};

/// A finite relational structure: points, a list of binary relations, and point colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub relations: Vec<Relation>,
    pub colors: Vec<u64>,
    /// Names of the relations; two structures are comparable iff these agree.
    pub signature: Vec<String>,
}

impl Structure {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Order plus one relation per agent, sorted by agent name.
    pub fn from_frame(frame: &Frame) -> Structure {
        let mut named: Vec<(String, Relation)> =
            frame.agents().iter().enumerate().map(|(i, a)| (a.to_string(), frame.relation(i).clone())).collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        let mut signature = vec!["≤".to_string()];
        let mut relations = vec![frame.order().clone()];
        for (a, r) in named {
            signature.push(a);
            relations.push(r);
        }
        Structure { relations, colors: vec![0; frame.len()], signature }
    }

    /// Like [`Structure::from_frame`], with worlds colored by the atoms true there.
    pub fn from_model(model: &Model) -> Structure {
        let mut s = Structure::from_frame(model.frame());
        let atoms: Vec<&String> = model.valuation().keys().collect();
        for (w, c) in s.colors.iter_mut().enumerate() {
            *c = atoms
                .iter()
                .enumerate()
                .filter(|(_, p)| model.val(p).is_some_and(|x| x.contains(w)))
                .fold(0u64, |acc, (i, _)| acc | 1 << (i % 64));
        }
        s.signature.extend(atoms.iter().map(|p| format!("atom:{p}")));
        s
    }

    /// Order plus the graphs of `◇` and `□` for each agent.
    pub fn from_algebra(alg: &TableAlgebra) -> Structure {
        use crate::algebra::Hao;
        let n = alg.len();
        let order = Relation::from_pairs(n, alg.lattice().strict_pairs().into_iter().chain((0..n).map(|x| (x, x))));
        let mut signature = vec!["≤".to_string()];
        let mut relations = vec![order];
        let mut agents: Vec<(usize, String)> = alg.agents().iter().map(|a| a.to_string()).enumerate().collect();
        agents.sort_by(|a, b| a.1.cmp(&b.1));
        for (i, a) in agents {
            signature.push(format!("dia:{a}"));
            relations.push(Relation::from_pairs(n, (0..n).map(|x| (x, alg.d(i, x as u32) as usize))));
            signature.push(format!("box:{a}"));
            relations.push(Relation::from_pairs(n, (0..n).map(|x| (x, alg.b(i, x as u32) as usize))));
        }
        Structure { relations, colors: vec![0; n], signature }
    }
}

/// Mutually inverse maps between two structures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl IsoWitness {
    pub fn identity(n: usize) -> Self {
        IsoWitness { forward: (0..n).collect(), backward: (0..n).collect() }
    }
}

/// Iterated color refinement over both structures at once, so colors are comparable.
fn refine(x: &Structure, y: &Structure) -> (Vec<usize>, Vec<usize>) {
    let n = x.len();
    let mut cx: Vec<usize> = Vec::new();
    let mut cy: Vec<usize> = Vec::new();
    {
        let mut ids = BTreeMap::new();
        for &c in x.colors.iter().chain(&y.colors) {
            let next = ids.len();
            ids.entry(c).or_insert(next);
        }
        cx.extend(x.colors.iter().map(|c| ids[c]));
        cy.extend(y.colors.iter().map(|c| ids[c]));
    }
    let inv_x: Vec<Relation> = x.relations.iter().map(Relation::inverse).collect();
    let inv_y: Vec<Relation> = y.relations.iter().map(Relation::inverse).collect();
    let mut classes = usize::MAX;
    loop {
        let sig = |s: &Structure, inv: &[Relation], col: &[usize], v: usize| {
            let mut items: Vec<(usize, u8, usize)> = Vec::new();
            for (r, rel) in s.relations.iter().enumerate() {
                for u in rel.succ(v).ones() {
                    items.push((r, 0, col[u]));
                }
                for u in inv[r].succ(v).ones() {
                    items.push((r, 1, col[u]));
                }
                if rel.contains(v, v) {
                    items.push((r, 2, 0));
                }
            }
            items.sort_unstable();
            (col[v], items)
        };
        let sx: Vec<_> = (0..n).map(|v| sig(x, &inv_x, &cx, v)).collect();
        let sy: Vec<_> = (0..n).map(|v| sig(y, &inv_y, &cy, v)).collect();
        let mut ids = BTreeMap::new();
        for s in sx.iter().chain(&sy) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        cx = sx.iter().map(|s| ids[s]).collect();
        cy = sy.iter().map(|s| ids[s]).collect();
        if ids.len() == classes {
            return (cx, cy);
        }
        classes = ids.len();
    }
}

fn consistent(x: &Structure, y: &Structure, map: &[Option<usize>], v: usize, w: usize) -> bool {
    for (rx, ry) in x.relations.iter().zip(&y.relations) {
        if rx.contains(v, v) != ry.contains(w, w) {
            return false;
        }
        for (u, m) in map.iter().enumerate() {
            if let Some(t) = *m {
                if rx.contains(v, u) != ry.contains(w, t) || rx.contains(u, v) != ry.contains(t, w) {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    x: &Structure,
    y: &Structure,
    order: &[usize],
    cand: &[Vec<usize>],
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    depth: usize,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for &w in &cand[v] {
        if used[w] || !consistent(x, y, map, v, w) {
            continue;
        }
        map[v] = Some(w);
        used[w] = true;
        if search(x, y, order, cand, map, used, depth + 1) {
            return true;
        }
        map[v] = None;
        used[w] = false;
    }
    false
}

/// Checks that `forward` is a bijection preserving and reflecting every relation and color.
pub fn verify_witness(x: &Structure, y: &Structure, w: &IsoWitness) -> bool {
    let n = x.len();
    if y.len() != n || w.forward.len() != n || w.backward.len() != n {
        return false;
    }
    if (0..n).any(|v| w.backward[w.forward[v]] != v || x.colors[v] != y.colors[w.forward[v]]) {
        return false;
    }
    x.relations.iter().zip(&y.relations).all(|(rx, ry)| {
        (0..n).all(|a| (0..n).all(|b| rx.contains(a, b) == ry.contains(w.forward[a], w.forward[b])))
    })
}

/// Backtracking isomorphism search, pruned by color refinement.
pub fn find_isomorphism(x: &Structure, y: &Structure) -> Result<Option<IsoWitness>, DualityError> {
    if x.signature != y.signature || x.relations.len() != y.relations.len() {
        return Err(DualityError::SignatureMismatch(x.signature.join(","), y.signature.join(",")));
    }
    let n = x.len();
    if y.len() != n {
        return Ok(None);
    }
    let (cx, cy) = refine(x, y);
    let mut hx = cx.clone();
    let mut hy = cy.clone();
    hx.sort_unstable();
    hy.sort_unstable();
    if hx != hy {
        return Ok(None);
    }
    let cand: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| cy[w] == cx[v]).collect()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (cand[v].len(), v));
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if !search(x, y, &order, &cand, &mut map, &mut used, 0) {
        return Ok(None);
    }
    let forward: Vec<usize> = map.into_iter().map(|m| m.expect("complete assignment")).collect();
    let mut backward = vec![0; n];
    for (v, &w) in forward.iter().enumerate() {
        backward[w] = v;
    }
    let witness = IsoWitness { forward, backward };
    assert!(verify_witness(x, y, &witness), "isomorphism search produced an invalid witness");
    Ok(Some(witness))
}

/// Isomorphism of frames, matching agents by name.
pub fn frame_isomorphism(a: &Frame, b: &Frame) -> Result<Option<IsoWitness>, DualityError> {
    find_isomorphism(&Structure::from_frame(a), &Structure::from_frame(b))
}

/// Isomorphism of table algebras as HAOs (order plus modal operators), matching agents by name.
pub fn algebra_isomorphism(a: &TableAlgebra, b: &TableAlgebra) -> Result<Option<IsoWitness>, DualityError> {
    find_isomorphism(&Structure::from_algebra(a), &Structure::from_algebra(b))
}
