//! Bounded enumeration and seeded sampling of frames, models, actions and formulas.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::duality::downsets;
use crate::relational::{Frame, Model, ModelKind, Relation};
use crate::syntax::{ActionRef, ActionStructure, Agent, Formula};

/// Largest world count handled by the enumerators.
pub const MAX_ENUM_WORLDS: usize = 5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bit(n: usize, i: usize, j: usize) -> u64 {
    1 << (i * n + j)
}

fn compose(n: usize, a: u64, b: u64) -> u64 {
    let mut out = 0;
    for i in 0..n {
        for k in 0..n {
            if a & bit(n, i, k) != 0 {
                for j in 0..n {
                    if b & bit(n, k, j) != 0 {
                        out |= bit(n, i, j);
                    }
                }
            }
        }
    }
    out
}

fn inverse(n: usize, a: u64) -> u64 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if a & bit(n, i, j) != 0 {
                out |= bit(n, j, i);
            }
        }
    }
    out
}

fn permute(n: usize, a: u64, p: &[usize]) -> u64 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if a & bit(n, i, j) != 0 {
                out |= bit(n, p[i], p[j]);
            }
        }
    }
    out
}

fn identity_mask(n: usize) -> u64 {
    (0..n).fold(0, |acc, i| acc | bit(n, i, i))
}

fn ik_mask(n: usize, le: u64, ge: u64, r: u64) -> bool {
    let ge_r = compose(n, ge, r);
    let r_le = compose(n, r, le);
    compose(n, r, ge) & !ge_r == 0 && compose(n, le, r) & !r_le == 0 && ge_r & r_le == r
}

fn is_equivalence_mask(n: usize, r: u64) -> bool {
    r & identity_mask(n) == identity_mask(n) && inverse(n, r) == r && compose(n, r, r) & !r == 0
}

/// Partial orders on `n` points, one per isomorphism class, as `u64` masks (bit `i*n+j` for `i ≤ j`).
fn poset_masks(n: usize) -> Vec<u64> {
    assert!(n <= MAX_ENUM_WORLDS, "posets are enumerated up to {MAX_ENUM_WORLDS} points");
    let off: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(i, j)| i != j).collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = BTreeSet::new();
    let id = identity_mask(n);
    for m in 0u64..1 << off.len() {
        let rel = off.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).fold(id, |acc, (_, &(i, j))| acc | bit(n, i, j));
        if rel & inverse(n, rel) != id || compose(n, rel, rel) & !rel != 0 {
            continue;
        }
        let canon = perms.iter().map(|p| permute(n, rel, p)).min().unwrap_or(rel);
        seen.insert(canon);
    }
    seen.into_iter().collect()
}

/// One partial order per isomorphism class, `x ≤ y` as `contains(x, y)`.
pub fn posets(n: usize) -> Vec<Relation> {
    poset_masks(n).into_iter().map(|m| Relation::from_mask(n, m)).collect()
}

fn relation_masks(n: usize, le: u64, kind: ModelKind) -> Vec<u64> {
    if kind == ModelKind::Classical && le != identity_mask(n) {
        return Vec::new();
    }
    let ge = inverse(n, le);
    (0u64..1 << (n * n))
        .filter(|&r| match kind {
            ModelKind::Classical => true,
            ModelKind::Ik => ik_mask(n, le, ge, r),
            ModelKind::Mipc => ik_mask(n, le, ge, r) && is_equivalence_mask(n, r),
        })
        .collect()
}

/// Every accessibility relation compatible with `order` for the given kind.
pub fn frame_relations(order: &Relation, kind: ModelKind) -> Vec<Relation> {
    let n = order.len();
    let le = order.pairs().into_iter().fold(0, |acc, (i, j)| acc | bit(n, i, j));
    relation_masks(n, le, kind).into_iter().map(|m| Relation::from_mask(n, m)).collect()
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

fn orders_for(n: usize, kind: ModelKind) -> Vec<u64> {
    if kind == ModelKind::Classical {
        vec![identity_mask(n)]
    } else {
        poset_masks(n)
    }
}

/// All frames on exactly `n` points: posets up to isomorphism times every tuple of relations.
pub fn frames(n: usize, agents: &[Agent], kind: ModelKind) -> Vec<Frame> {
    let mut out = Vec::new();
    for le in orders_for(n, kind) {
        let rels = relation_masks(n, le, kind);
        for combo in (0..agents.len()).map(|_| rels.iter()).multi_cartesian_product() {
            let rel = combo.into_iter().map(|&m| Relation::from_mask(n, m)).collect();
            let frame = Frame::new(world_names(n), Relation::from_mask(n, le), agents.to_vec(), rel)
                .expect("enumerated frame is well formed");
            out.push(frame);
        }
    }
    out
}

/// Number of frames [`frames`] would produce.
pub fn count_frames(n: usize, agents: usize, kind: ModelKind) -> usize {
    orders_for(n, kind).into_iter().map(|le| relation_masks(n, le, kind).len().pow(agents as u32)).sum()
}

/// Every valuation of `atoms` by downsets of the frame.
pub fn valuations(frame: &Frame, atoms: &[String]) -> Vec<BTreeMap<String, FixedBitSet>> {
    let ds = downsets(frame);
    (0..atoms.len())
        .map(|_| ds.iter())
        .multi_cartesian_product()
        .map(|sets| atoms.iter().cloned().zip(sets.into_iter().cloned()).collect())
        .collect()
}

/// Every model over `frame` with atoms valued by downsets.
pub fn models(frame: &Frame, atoms: &[String], kind: ModelKind) -> Vec<Model> {
    valuations(frame, atoms)
        .into_iter()
        .map(|v| Model::new(kind, frame.clone(), v).expect("downset valuation"))
        .collect()
}

/// Draws frames uniformly by isomorphism class of the order, then uniformly per agent
/// among the compatible relations.
#[derive(Debug, Default)]
pub struct FrameSampler {
    cache: HashMap<(usize, ModelKind), Vec<(u64, Vec<u64>)>>,
}

impl FrameSampler {
    pub fn new() -> Self {
        FrameSampler::default()
    }

    fn table(&mut self, n: usize, kind: ModelKind) -> &Vec<(u64, Vec<u64>)> {
        self.cache.entry((n, kind)).or_insert_with(|| {
            orders_for(n, kind).into_iter().map(|le| (le, relation_masks(n, le, kind))).collect()
        })
    }

    pub fn sample(&mut self, rng: &mut impl Rng, n: usize, agents: &[Agent], kind: ModelKind) -> Frame {
        let table = self.table(n, kind);
        let (le, rels) = table.choose(rng).expect("at least one order");
        let rel = agents.iter().map(|_| Relation::from_mask(n, *rels.choose(rng).expect("identity is always allowed")));
        Frame::new(world_names(n), Relation::from_mask(n, *le), agents.to_vec(), rel.collect())
            .expect("sampled frame is well formed")
    }
}

/// A uniformly random downset valuation.
pub fn random_valuation(rng: &mut impl Rng, frame: &Frame, atoms: &[String]) -> BTreeMap<String, FixedBitSet> {
    let ds = downsets(frame);
    atoms.iter().map(|p| (p.clone(), ds.choose(rng).expect("empty set is a downset").clone())).collect()
}

pub fn random_model(rng: &mut impl Rng, frame: Frame, atoms: &[String], kind: ModelKind) -> Model {
    let val = random_valuation(rng, &frame, atoms);
    Model::new(kind, frame, val).expect("downset valuation")
}

/// A random action with `1..=max_states` states, arbitrary relations and preconditions from `pool`.
pub fn random_action(
    rng: &mut impl Rng,
    name: &str,
    agents: &[Agent],
    max_states: usize,
    pool: &[Formula],
) -> ActionStructure {
    let k = rng.gen_range(1..=max_states);
    let states = (0..k).map(|j| format!("s{j}")).collect();
    let rel: BTreeMap<Agent, Vec<(usize, usize)>> = agents
        .iter()
        .map(|a| (a.clone(), (0..k).cartesian_product(0..k).filter(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    let pre = (0..k).map(|_| pool.choose(rng).cloned().unwrap_or_else(Formula::top)).collect();
    ActionStructure::new(name, states, rng.gen_range(0..k), rel, pre).expect("random action is well formed")
}

/// Every action on `k` states over `agents` whose preconditions are drawn from `pool`.
pub fn actions(name: &str, agents: &[Agent], k: usize, pool: &[Formula]) -> Vec<ActionStructure> {
    let pairs: Vec<(usize, usize)> = (0..k).cartesian_product(0..k).collect();
    let rels: Vec<Vec<(usize, usize)>> = (0u32..1 << pairs.len())
        .map(|m| pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).collect())
        .collect();
    let states: Vec<String> = (0..k).map(|j| format!("s{j}")).collect();
    let mut out = Vec::new();
    for combo in (0..agents.len()).map(|_| rels.iter()).multi_cartesian_product() {
        for pre in (0..k).map(|_| pool.iter()).multi_cartesian_product() {
            let rel: BTreeMap<Agent, Vec<(usize, usize)>> =
                agents.iter().cloned().zip(combo.iter().map(|r| r.to_vec())).collect();
            let pre: Vec<Formula> = pre.into_iter().cloned().collect();
            out.push(ActionStructure::new(name, states.clone(), 0, rel, pre).expect("enumerated action"));
        }
    }
    out
}

/// Shape of random formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub atoms: Vec<String>,
    pub agents: Vec<Agent>,
    /// Action names with their state labels; dynamic modalities pick a random state.
    pub actions: Vec<(String, Vec<String>)>,
    pub max_depth: usize,
    /// Bound on nested dynamic modalities.
    pub max_dynamic: usize,
    pub constants: bool,
}

impl FormulaShape {
    pub fn static_over(atoms: &[&str], agents: &[Agent], max_depth: usize) -> Self {
        FormulaShape {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            agents: agents.to_vec(),
            actions: Vec::new(),
            max_depth,
            max_dynamic: 0,
            constants: true,
        }
    }

    pub fn with_actions(mut self, actions: &[ActionStructure], max_dynamic: usize) -> Self {
        self.actions = actions.iter().map(|a| (a.name().to_string(), a.states().to_vec())).collect();
        self.max_dynamic = max_dynamic;
        self
    }

    fn leaf(&self, rng: &mut impl Rng) -> Formula {
        let consts = if self.constants { 2 } else { 0 };
        let i = rng.gen_range(0..self.atoms.len() + consts);
        match i.checked_sub(self.atoms.len()) {
            None => Formula::atom(&self.atoms[i]),
            Some(0) => Formula::Bot,
            Some(_) => Formula::top(),
        }
    }

    /// A random formula of depth at most `depth`.
    pub fn sample(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        self.sample_with(rng, depth, self.max_dynamic)
    }

    fn sample_with(&self, rng: &mut impl Rng, depth: usize, dynamic: usize) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 5) {
            return self.leaf(rng);
        }
        let dynamic_ok = dynamic > 0 && !self.actions.is_empty();
        let modal_ok = !self.agents.is_empty();
        let choice = rng.gen_range(0..if dynamic_ok { 7 } else { 5 });
        let d = depth - 1;
        match choice {
            0 => Formula::and(self.sample_with(rng, d, dynamic), self.sample_with(rng, d, dynamic)),
            1 => Formula::or(self.sample_with(rng, d, dynamic), self.sample_with(rng, d, dynamic)),
            2 => Formula::imp(self.sample_with(rng, d, dynamic), self.sample_with(rng, d, dynamic)),
            3 | 4 if modal_ok => {
                let a = self.agents.choose(rng).expect("agents").clone();
                let inner = self.sample_with(rng, d, dynamic);
                if choice == 3 {
                    Formula::Box(a, Box::new(inner))
                } else {
                    Formula::Dia(a, Box::new(inner))
                }
            }
            3 | 4 => Formula::imp(self.sample_with(rng, d, dynamic), Formula::Bot),
            _ => {
                let (name, states) = self.actions.choose(rng).expect("actions");
                let point = states.choose(rng).expect("nonempty action").clone();
                let r = ActionRef::at(name.clone(), point);
                let inner = self.sample_with(rng, d, dynamic - 1);
                if choice == 5 {
                    Formula::DynDia(r, Box::new(inner))
                } else {
                    Formula::DynBox(r, Box::new(inner))
                }
            }
        }
    }

    /// Every formula of depth at most `depth` over the shape's atoms, agents and actions,
    /// with constants included when the shape allows them.
    pub fn all(&self, depth: usize) -> Vec<Formula> {
        let mut level: Vec<Formula> = self.atoms.iter().map(Formula::atom).collect();
        if self.constants {
            level.push(Formula::Bot);
            level.push(Formula::top());
        }
        for _ in 0..depth {
            let prev = level.clone();
            let mut next: Vec<Formula> = prev.clone();
            for (a, b) in prev.iter().cartesian_product(prev.iter()) {
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::or(a.clone(), b.clone()));
                next.push(Formula::imp(a.clone(), b.clone()));
            }
            for (ag, a) in self.agents.iter().cartesian_product(prev.iter()) {
                next.push(Formula::Box(ag.clone(), Box::new(a.clone())));
                next.push(Formula::Dia(ag.clone(), Box::new(a.clone())));
            }
            let mut seen = BTreeSet::new();
            next.retain(|f| seen.insert(f.to_string()));
            level = next;
        }
        level
    }
}

/// Which models a [`for_each_model`] scan visits.
///
/// For each kind and each size `n ≤ max_worlds`, all frames are visited when there are at
/// most `exhaustive_frames` of them, otherwise `samples_per_size` seeded samples. Each frame
/// gets all downset valuations when there are at most `max_valuations`, otherwise that many
/// seeded random ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankConfig {
    pub max_worlds: usize,
    pub exhaustive_frames: usize,
    pub samples_per_size: usize,
    pub max_valuations: usize,
    pub kinds: Vec<ModelKind>,
    pub seed: u64,
}

impl Default for BankConfig {
    fn default() -> Self {
        BankConfig {
            max_worlds: 3,
            exhaustive_frames: 1000,
            samples_per_size: 200,
            max_valuations: 16,
            kinds: vec![ModelKind::Classical, ModelKind::Ik],
            seed: 0,
        }
    }
}

/// What a scan actually covered.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BankCoverage {
    pub models: usize,
    /// Per kind, the sizes whose frames were all visited.
    pub exhaustive_sizes: BTreeMap<String, Vec<usize>>,
    /// Per kind, the sizes whose frames were sampled.
    pub sampled_sizes: BTreeMap<String, Vec<usize>>,
    /// True when every visited frame got all of its valuations.
    pub all_valuations: bool,
    /// True when the scan was stopped by the callback.
    pub stopped: bool,
}

impl BankCoverage {
    pub fn is_exhaustive(&self) -> bool {
        self.sampled_sizes.values().all(Vec::is_empty) && self.all_valuations && !self.stopped
    }
}

/// Visits the models described by `cfg`; `visit` returns `false` to stop early.
pub fn for_each_model(
    cfg: &BankConfig,
    agents: &[Agent],
    atoms: &[String],
    mut visit: impl FnMut(&Model) -> bool,
) -> BankCoverage {
    let mut rng = rng(cfg.seed);
    let mut sampler = FrameSampler::new();
    let mut cov = BankCoverage { all_valuations: true, ..BankCoverage::default() };
    for &kind in &cfg.kinds {
        let key = kind.to_string();
        cov.exhaustive_sizes.entry(key.clone()).or_default();
        cov.sampled_sizes.entry(key.clone()).or_default();
        for n in 1..=cfg.max_worlds {
            let frames_n = if count_frames(n, agents.len(), kind) <= cfg.exhaustive_frames {
                cov.exhaustive_sizes.get_mut(&key).expect("entry").push(n);
                frames(n, agents, kind)
            } else {
                cov.sampled_sizes.get_mut(&key).expect("entry").push(n);
                (0..cfg.samples_per_size).map(|_| sampler.sample(&mut rng, n, agents, kind)).collect()
            };
            for frame in frames_n {
                let ds = downsets(&frame).len();
                let total = (ds as u128).checked_pow(atoms.len() as u32);
                let vals = if total.is_some_and(|t| t <= cfg.max_valuations as u128) {
                    valuations(&frame, atoms)
                } else {
                    cov.all_valuations = false;
                    (0..cfg.max_valuations).map(|_| random_valuation(&mut rng, &frame, atoms)).collect()
                };
                for v in vals {
                    let m = Model::new(kind, frame.clone(), v).expect("downset valuation");
                    cov.models += 1;
                    if !visit(&m) {
                        cov.stopped = true;
                        return cov;
                    }
                }
            }
        }
    }
    cov
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relational::satisfies_ik;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn classical_relations_unrestricted() {
        assert_eq!(frame_relations(&Relation::identity(2), ModelKind::Classical).len(), 16);
        assert_eq!(count_frames(2, 1, ModelKind::Classical), 16);
    }

    #[test]
    fn ik_masks_agree_with_relations() {
        for le in posets(3) {
            let masks = frame_relations(&le, ModelKind::Ik);
            let direct = (0u64..512).map(|m| Relation::from_mask(3, m)).filter(|r| satisfies_ik(&le, r)).count();
            assert_eq!(masks.len(), direct);
            assert!(masks.iter().all(|r| satisfies_ik(&le, r)));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let agents = vec![Agent::from("a"), Agent::from("b")];
        let mut s = FrameSampler::new();
        let a = s.sample(&mut rng(7), 3, &agents, ModelKind::Ik);
        let b = s.sample(&mut rng(7), 3, &agents, ModelKind::Ik);
        assert_eq!(a, b);
        let shape = FormulaShape::static_over(&["p"], &agents, 3);
        assert_eq!(shape.sample(&mut rng(1), 3), shape.sample(&mut rng(1), 3));
        assert!(shape.sample(&mut rng(2), 3).depth() <= 3);
    }

    #[test]
    fn small_bank_is_exhaustive() {
        let cfg = BankConfig { max_worlds: 2, ..BankConfig::default() };
        let agents = vec![Agent::from("a")];
        let cov = for_each_model(&cfg, &agents, &["p".to_string()], |_| true);
        assert!(cov.is_exhaustive());
        // classical: 2·2 + 16·4; IK: 2·2 + 16·4 (discrete) + 8·3 (chain)
        assert_eq!(cov.models, 68 + 92);
    }
}
