#![allow(dead_code)]

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use ieak::relational::{Frame, Model, ModelKind, Relation};
use ieak::syntax::{ActionStructure, Agent, Env, Formula};

pub fn atom(s: &str) -> Formula {
    Formula::atom(s)
}

pub fn set(n: usize, items: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for &i in items {
        s.insert(i);
    }
    s
}

pub fn agents(names: &[&str]) -> Vec<Agent> {
    names.iter().map(|a| Agent::from(*a)).collect()
}

/// Three worlds Gb, Ga, Gc; agent i is uncertain between the two worlds where i holds white.
pub fn cards_model() -> Model {
    let worlds: Vec<String> = ["Gb", "Ga", "Gc"].iter().map(|s| s.to_string()).collect();
    let sym = |x: usize, y: usize| {
        let mut r = Relation::identity(3);
        r.insert(x, y);
        r.insert(y, x);
        r
    };
    let frame = Frame::discrete(worlds, agents(&["a", "b", "c"]), vec![sym(0, 2), sym(1, 2), sym(0, 1)]).unwrap();
    let mut val = BTreeMap::new();
    for (i, g) in ["Gb", "Ga", "Gc"].iter().enumerate() {
        val.insert(g.to_string(), set(3, &[i]));
        let w = format!("W{}", &g[1..]);
        val.insert(w, set(3, &(0..3).filter(|&j| j != i).collect::<Vec<_>>()));
    }
    Model::new(ModelKind::Classical, frame, val).unwrap()
}

pub fn cards_alpha() -> ActionStructure {
    ActionStructure::from_labels(
        "alpha",
        &["k", "l"],
        "k",
        &[
            ("a", &[("k", "k"), ("l", "l")]),
            ("b", &[("k", "k"), ("l", "l")]),
            ("c", &[("k", "k"), ("k", "l"), ("l", "k"), ("l", "l")]),
        ],
        &[("k", atom("Ga")), ("l", atom("Wa"))],
    )
    .unwrap()
}

pub fn cards_beta() -> ActionStructure {
    let pre = Formula::conj(
        ["Ga", "Gb", "Gc"].iter().map(|g| Formula::imp(atom(g), Formula::boxed("a", atom(g)))),
    );
    ActionStructure::from_labels(
        "beta",
        &["s"],
        "s",
        &[("a", &[("s", "s")]), ("b", &[("s", "s")]), ("c", &[("s", "s")])],
        &[("s", pre)],
    )
    .unwrap()
}

pub fn cards_env() -> Env {
    Env::with_actions(agents(&["a", "b", "c"]), [cards_alpha(), cards_beta()]).unwrap()
}
