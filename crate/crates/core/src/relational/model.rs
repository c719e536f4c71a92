use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::relation::Relation;
use super::RelationalError;
use crate::syntax::Agent;

/// Which semantics a model is read under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Classical,
    Ik,
    Mipc,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Classical => "classical",
            ModelKind::Ik => "ik",
            ModelKind::Mipc => "mipc",
        })
    }
}

/// Worlds, a partial order (identity for classical frames) and one relation per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    worlds: Vec<String>,
    order: Relation,
    below: Vec<FixedBitSet>,
    agents: Vec<Agent>,
    rel: Vec<Relation>,
    box_rel: Vec<Relation>,
}

impl Frame {
    /// `order.contains(x, y)` means `x ≤ y`.
    pub fn new(
        worlds: Vec<String>,
        order: Relation,
        agents: Vec<Agent>,
        rel: Vec<Relation>,
    ) -> Result<Self, RelationalError> {
        let n = worlds.len();
        let mut seen = std::collections::BTreeSet::new();
        if let Some(w) = worlds.iter().find(|w| !seen.insert(w.as_str())) {
            return Err(RelationalError::Invalid(format!("duplicate world `{w}`")));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(a) = agents.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(RelationalError::Invalid(format!("duplicate agent `{a}`")));
        }
        if order.len() != n || rel.len() != agents.len() || rel.iter().any(|r| r.len() != n) {
            return Err(RelationalError::Invalid("relation sizes do not match the world set".into()));
        }
        let geq = order.inverse();
        let below = (0..n).map(|w| geq.succ(w).clone()).collect();
        let box_rel = rel.iter().map(|r| geq.then(r)).collect();
        Ok(Frame { worlds, order, below, agents, rel, box_rel })
    }

    pub fn discrete(worlds: Vec<String>, agents: Vec<Agent>, rel: Vec<Relation>) -> Result<Self, RelationalError> {
        let n = worlds.len();
        Frame::new(worlds, Relation::identity(n), agents, rel)
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn order(&self) -> &Relation {
        &self.order
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_index(&self, a: &Agent) -> Option<usize> {
        self.agents.iter().position(|b| b == a)
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.rel[i]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.rel
    }

    /// The relation `≥∘R` used by the box clause.
    pub fn box_relation(&self, i: usize) -> &Relation {
        &self.box_rel[i]
    }

    /// `{z | z ≤ w}`.
    pub fn below(&self, w: usize) -> &FixedBitSet {
        &self.below[w]
    }

    /// `{z | w ≤ z}`.
    pub fn above(&self, w: usize) -> &FixedBitSet {
        self.order.succ(w)
    }

    pub fn is_discrete(&self) -> bool {
        self.order == Relation::identity(self.len())
    }

    pub fn is_downset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|w| self.below[w].is_subset(set))
    }

    pub fn up_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        self.order.image(set)
    }

    pub fn down_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for w in set.ones() {
            out.union_with(&self.below[w]);
        }
        out
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Downset implication `(X ∩ Yᶜ)↑ᶜ`.
    pub fn downset_imp(&self, x: &FixedBitSet, y: &FixedBitSet) -> FixedBitSet {
        let mut bad = x.clone();
        bad.difference_with(y);
        let mut out = self.up_closure(&bad);
        out.toggle_range(..);
        out
    }

    /// `⟨R⟩X = R⁻¹[X]`.
    pub fn dia(&self, i: usize, x: &FixedBitSet) -> FixedBitSet {
        self.rel[i].preimage(x)
    }

    /// `[≥∘R]X`.
    pub fn boxed(&self, i: usize, x: &FixedBitSet) -> FixedBitSet {
        self.box_rel[i].universal_preimage(x)
    }

    pub fn set_names(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|w| self.worlds[w].clone()).collect()
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<FixedBitSet, RelationalError> {
        let mut s = self.empty_set();
        for n in names {
            let w = self
                .world_index(n.as_ref())
                .ok_or_else(|| RelationalError::Invalid(format!("unknown world `{}`", n.as_ref())))?;
            s.insert(w);
        }
        Ok(s)
    }
}

/// A frame with a valuation; downset-valued for `Ik` and `Mipc` models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    kind: ModelKind,
    frame: Frame,
    val: BTreeMap<String, FixedBitSet>,
}

impl Model {
    pub fn new(kind: ModelKind, frame: Frame, val: BTreeMap<String, FixedBitSet>) -> Result<Self, RelationalError> {
        if kind == ModelKind::Classical && !frame.is_discrete() {
            return Err(RelationalError::Invalid("classical models need the identity order".into()));
        }
        for (p, s) in &val {
            if s.len() != frame.len() {
                return Err(RelationalError::Invalid(format!("valuation of `{p}` has the wrong size")));
            }
            if kind != ModelKind::Classical && !frame.is_downset(s) {
                return Err(RelationalError::NotDownset(p.clone()));
            }
        }
        Ok(Model { kind, frame, val })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn val(&self, p: &str) -> Option<&FixedBitSet> {
        self.val.get(p)
    }

    pub fn valuation(&self) -> &BTreeMap<String, FixedBitSet> {
        &self.val
    }

    /// Atoms true at world `w`.
    pub fn atoms_at(&self, w: usize) -> Vec<&str> {
        self.val.iter().filter(|(_, s)| s.contains(w)).map(|(p, _)| p.as_str()).collect()
    }

    pub fn with_kind(&self, kind: ModelKind) -> Result<Self, RelationalError> {
        Model::new(kind, self.frame.clone(), self.val.clone())
    }
}

/// A violated frame condition with a witness pair or triple of world names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Violation {
    OrderNotReflexive { world: String },
    OrderNotAntisymmetric { x: String, y: String },
    OrderNotTransitive { x: String, y: String, z: String },
    /// `(R∘≥) ⊆ (≥∘R)` fails.
    ForthDown { agent: String, x: String, y: String },
    /// `(≤∘R) ⊆ (R∘≤)` fails.
    BackUp { agent: String, x: String, y: String },
    /// `R = (≥∘R) ∩ (R∘≤)` fails.
    Sandwich { agent: String, x: String, y: String },
    NotEquivalence { agent: String },
    NotDiscrete { x: String, y: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrderNotReflexive { world } => write!(f, "order not reflexive at {world}"),
            Violation::OrderNotAntisymmetric { x, y } => write!(f, "order not antisymmetric: {x} ≤ {y} ≤ {x}"),
            Violation::OrderNotTransitive { x, y, z } => {
                write!(f, "order not transitive: {x} ≤ {y} ≤ {z} but not {x} ≤ {z}")
            }
            Violation::ForthDown { agent, x, y } => {
                write!(f, "agent {agent}: (R∘≥) ⊆ (≥∘R) fails at ({x},{y})")
            }
            Violation::BackUp { agent, x, y } => write!(f, "agent {agent}: (≤∘R) ⊆ (R∘≤) fails at ({x},{y})"),
            Violation::Sandwich { agent, x, y } => {
                write!(f, "agent {agent}: R = (≥∘R) ∩ (R∘≤) fails at ({x},{y})")
            }
            Violation::NotEquivalence { agent } => write!(f, "agent {agent}: relation is not an equivalence"),
            Violation::NotDiscrete { x, y } => write!(f, "classical frame has {x} ≤ {y}"),
        }
    }
}

/// Result of [`check_ik_frame`]; valid iff no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub violations: Vec<Violation>,
}

impl FrameReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The three IK interaction conditions between a partial order `le` and a relation `r`.
pub fn satisfies_ik(le: &Relation, r: &Relation) -> bool {
    let ge = le.inverse();
    let ge_r = ge.then(r);
    let r_le = r.then(le);
    r.then(&ge).is_subset(&ge_r) && le.then(r).is_subset(&r_le) && ge_r.intersection(&r_le) == *r
}

/// Checks the order axioms and, per agent, the three IK interaction conditions;
/// `Mipc` additionally requires equivalence relations and `Classical` a discrete order.
pub fn check_ik_frame(frame: &Frame, kind: ModelKind) -> FrameReport {
    let n = frame.len();
    let name = |w: usize| frame.worlds[w].clone();
    let mut v = Vec::new();
    let le = frame.order();
    if let Some(w) = (0..n).find(|&w| !le.contains(w, w)) {
        v.push(Violation::OrderNotReflexive { world: name(w) });
    }
    if let Some((x, y)) = le.pairs().into_iter().find(|&(x, y)| x != y && le.contains(y, x)) {
        v.push(Violation::OrderNotAntisymmetric { x: name(x), y: name(y) });
    }
    if let Some((x, z)) = le.then(le).first_missing_in(le) {
        let y = (0..n).find(|&y| le.contains(x, y) && le.contains(y, z)).expect("composition witness");
        v.push(Violation::OrderNotTransitive { x: name(x), y: name(y), z: name(z) });
    }
    if kind == ModelKind::Classical {
        if let Some((x, y)) = le.pairs().into_iter().find(|&(x, y)| x != y) {
            v.push(Violation::NotDiscrete { x: name(x), y: name(y) });
        }
    }
    let ge = le.inverse();
    for (i, agent) in frame.agents.iter().enumerate() {
        let r = &frame.rel[i];
        let agent = agent.to_string();
        let ge_r = ge.then(r);
        let r_le = r.then(le);
        if let Some((x, y)) = r.then(&ge).first_missing_in(&ge_r) {
            v.push(Violation::ForthDown { agent: agent.clone(), x: name(x), y: name(y) });
        }
        if let Some((x, y)) = le.then(r).first_missing_in(&r_le) {
            v.push(Violation::BackUp { agent: agent.clone(), x: name(x), y: name(y) });
        }
        let sandwich = ge_r.intersection(&r_le);
        if let Some((x, y)) = sandwich.first_missing_in(r).or_else(|| r.first_missing_in(&sandwich)) {
            v.push(Violation::Sandwich { agent: agent.clone(), x: name(x), y: name(y) });
        }
        if kind == ModelKind::Mipc && !r.is_equivalence() {
            v.push(Violation::NotEquivalence { agent });
        }
    }
    FrameReport { violations: v }
}
