use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use super::model::{Frame, Model};
use super::relation::Relation;
use super::RelationalError;
use crate::syntax::ActionStructure;

/// How an updated model sits inside the intermediate structure `W×K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateTrace {
    /// The intermediate model; world `(w,j)` has index `j*|W| + w`.
    pub intermediate: Model,
    /// Number of worlds of the original model.
    pub base_len: usize,
    /// Intermediate indices of the surviving worlds, in updated-model order.
    pub surviving: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl UpdateTrace {
    /// `ι_j(w)`: index of `(w,j)` in the intermediate model.
    pub fn iota(&self, j: usize, w: usize) -> usize {
        j * self.base_len + w
    }

    /// The pair `(w,j)` of an intermediate index.
    pub fn pair(&self, idx: usize) -> (usize, usize) {
        (idx % self.base_len, idx / self.base_len)
    }

    /// `i(t)`: intermediate index of updated world `t`.
    pub fn embed(&self, t: usize) -> usize {
        self.surviving[t]
    }

    /// Updated-model index of `(w,j)`, if it survives.
    pub fn updated_index(&self, j: usize, w: usize) -> Option<usize> {
        self.position[self.iota(j, w)]
    }

    /// `ι_j⁻¹[i[X]]` for a set `X` of updated worlds.
    pub fn pull_back(&self, j: usize, x: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.base_len);
        for w in 0..self.base_len {
            if self.updated_index(j, w).is_some_and(|t| x.contains(t)) {
                out.insert(w);
            }
        }
        out
    }
}

/// The frame `∐_K F` with order `≤×Δ_K` and relation `R×α`; `succ[i][j]` lists the
/// α-successors of state `j` for the frame's `i`-th agent.
pub fn coproduct_frame(frame: &Frame, states: &[String], succ: &[Vec<Vec<usize>>]) -> Result<Frame, RelationalError> {
    let n = frame.len();
    let k = states.len();
    let size = n * k;
    let worlds: Vec<String> = (0..k)
        .flat_map(|j| (0..n).map(move |w| (w, j)))
        .map(|(w, j)| format!("({},{})", frame.worlds()[w], states[j]))
        .collect();
    let mut order = Relation::empty(size);
    for (x, y) in frame.order().pairs() {
        for j in 0..k {
            order.insert(j * n + x, j * n + y);
        }
    }
    let mut rel = Vec::new();
    for (ai, lists) in succ.iter().enumerate().take(frame.agents().len()) {
        let mut r = Relation::empty(size);
        for (w, u) in frame.relation(ai).pairs() {
            for (i, targets) in lists.iter().enumerate() {
                for &j in targets {
                    r.insert(i * n + w, j * n + u);
                }
            }
        }
        rel.push(r);
    }
    if rel.len() != frame.agents().len() {
        return Err(RelationalError::Invalid("one action relation per agent required".into()));
    }
    Frame::new(worlds, order, frame.agents().to_vec(), rel)
}

/// The subframe on the listed worlds, in the listed order.
pub fn restrict_frame(frame: &Frame, keep: &[usize]) -> Result<Frame, RelationalError> {
    let worlds = keep.iter().map(|&i| frame.worlds()[i].clone()).collect();
    let order = frame.order().restrict(keep);
    let rel = frame.relations().iter().map(|r| r.restrict(keep)).collect();
    Frame::new(worlds, order, frame.agents().to_vec(), rel)
}

/// Successor lists of `action` for each agent of `frame`.
pub fn action_successors(frame: &Frame, action: &ActionStructure) -> Result<Vec<Vec<Vec<usize>>>, RelationalError> {
    frame
        .agents()
        .iter()
        .map(|agent| {
            (0..action.len())
                .map(|j| action.succ(agent, j).map(<[usize]>::to_vec))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| RelationalError::MissingActionRelation {
                    action: action.name().to_string(),
                    agent: agent.to_string(),
                })
        })
        .collect()
}

/// The intermediate structure `∐_α M`: `|K|` copies of `M` with relation `R×α`
/// and order `≤×Δ_K`.
pub fn coproduct_model(model: &Model, action: &ActionStructure) -> Result<Model, RelationalError> {
    let n = model.len();
    let k = action.len();
    let succ = action_successors(model.frame(), action)?;
    let frame2 = coproduct_frame(model.frame(), action.states(), &succ)?;
    let val = model
        .valuation()
        .iter()
        .map(|(p, s)| {
            let mut t = FixedBitSet::with_capacity(n * k);
            for j in 0..k {
                for w in s.ones() {
                    t.insert(j * n + w);
                }
            }
            (p.clone(), t)
        })
        .collect();
    Model::new(model.kind(), frame2, val)
}

/// Restricts `∐_α M` to the pairs `(w,j)` with `w ∈ pre[j]`.
pub fn update_with_preconditions(
    model: &Model,
    action: &ActionStructure,
    pre: &[FixedBitSet],
) -> Result<(Model, UpdateTrace), RelationalError> {
    let intermediate = coproduct_model(model, action)?;
    let n = model.len();
    let surviving: Vec<usize> = (0..action.len())
        .flat_map(|j| pre[j].ones().map(move |w| j * n + w))
        .collect();
    let mut position = vec![None; intermediate.len()];
    for (t, &idx) in surviving.iter().enumerate() {
        position[idx] = Some(t);
    }
    let frame = restrict_frame(intermediate.frame(), &surviving)?;
    let val: BTreeMap<String, FixedBitSet> = intermediate
        .valuation()
        .iter()
        .map(|(p, s)| {
            let mut t = FixedBitSet::with_capacity(surviving.len());
            for (i, &idx) in surviving.iter().enumerate() {
                if s.contains(idx) {
                    t.insert(i);
                }
            }
            (p.clone(), t)
        })
        .collect();
    let updated = Model::new(model.kind(), frame, val)?;
    let trace = UpdateTrace { intermediate, base_len: n, surviving, position };
    Ok((updated, trace))
}
