//! Property suites over enumerated and sampled instances, each producing a serializable report.

mod agreement;
mod algebra;
mod cards;
mod duality;
mod frames;
mod rewriting;
mod soundness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraAction, Elem, Hao, TableAlgebra};
use crate::enumerate::{count_frames, frames, BankConfig, FrameSampler};
use crate::relational::{Frame, ModelKind};
use crate::syntax::Agent;

pub use agreement::verify_agreement;
pub use algebra::{verify_algebra_closure, verify_identities};
pub use cards::{
    cards_check_model, cards_hypotheses, example_regression, verify_cards, CardsFixture, CardsFormulas, CardsVerdict,
    ExampleCheck, ExampleReport,
};
pub use duality::verify_duality;
pub use frames::verify_frames;
pub use rewriting::verify_rewriter;
pub use soundness::verify_soundness;

/// Failures kept verbatim in a report; the rest are only counted.
pub const MAX_REPORTED_FAILURES: usize = 20;

/// Frame sizes whose frame count is at most this are enumerated exhaustively.
pub const EXHAUSTIVE_FRAMES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("bound `{name}` = {value} is outside 1..={cap}")]
    Bound { name: &'static str, value: u64, cap: u64 },
}

/// Bounds shared by all suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SuiteConfig {
    pub max_worlds: usize,
    pub max_action_states: usize,
    pub max_agents: usize,
    pub max_formula_depth: usize,
    pub random_seed: u64,
    pub sample_count: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_worlds: 3,
            max_action_states: 2,
            max_agents: 2,
            max_formula_depth: 2,
            random_seed: 0,
            sample_count: 200,
        }
    }
}

impl SuiteConfig {
    /// The default bounds of a suite.
    pub fn for_suite(suite: Suite) -> Self {
        let base = SuiteConfig::default();
        match suite {
            Suite::Frames => base,
            Suite::Soundness => SuiteConfig { sample_count: 3000, ..base },
            Suite::AlgebraClosure | Suite::Duality | Suite::Identities => {
                SuiteConfig { max_worlds: 4, max_agents: 1, sample_count: 120, ..base }
            }
            Suite::Agreement => SuiteConfig { max_worlds: 4, max_formula_depth: 4, sample_count: 1000, ..base },
            Suite::Rewriter => SuiteConfig { max_formula_depth: 4, sample_count: 200, ..base },
            Suite::Cards => SuiteConfig { max_agents: 3, sample_count: 500, ..base },
        }
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        let bounds: [(&'static str, usize, usize); 5] = [
            ("maxWorlds", self.max_worlds, 4),
            ("maxActionStates", self.max_action_states, 3),
            ("maxAgents", self.max_agents, 3),
            ("maxFormulaDepth", self.max_formula_depth, 6),
            ("sampleCount", self.sample_count, 100_000),
        ];
        for (name, value, cap) in bounds {
            if value == 0 || value > cap {
                return Err(SuiteError::Bound { name, value: value as u64, cap: cap as u64 });
            }
        }
        Ok(())
    }

    /// The model bank used by the semantic suites.
    pub fn bank(&self) -> BankConfig {
        BankConfig {
            max_worlds: self.max_worlds,
            samples_per_size: self.sample_count,
            seed: self.random_seed,
            ..BankConfig::default()
        }
    }

    pub fn agents(&self) -> Vec<Agent> {
        agent_names(self.max_agents)
    }
}

/// `a`, `b`, `c`, … truncated to `n`.
pub fn agent_names(n: usize) -> Vec<Agent> {
    (0..n).map(|i| Agent::from(((b'a' + i as u8) as char).to_string().as_str())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Frames,
    AlgebraClosure,
    Duality,
    Soundness,
    Rewriter,
    Agreement,
    Cards,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Frames,
        Suite::AlgebraClosure,
        Suite::Duality,
        Suite::Soundness,
        Suite::Rewriter,
        Suite::Agreement,
        Suite::Cards,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Frames => "frames",
            Suite::AlgebraClosure => "algebra-closure",
            Suite::Duality => "duality",
            Suite::Soundness => "soundness",
            Suite::Rewriter => "rewriter",
            Suite::Agreement => "agreement",
            Suite::Cards => "cards",
            Suite::Identities => "identities",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

/// Outcome of a suite run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub config: Option<SuiteConfig>,
    /// Instances checked, per kind of check.
    pub checks: BTreeMap<String, u64>,
    pub failure_count: u64,
    pub failures: Vec<String>,
    /// Coverage notes: which sizes were enumerated and which sampled.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: Suite, cfg: &SuiteConfig) -> Self {
        SuiteReport { suite: suite.name().to_string(), config: Some(cfg.clone()), ..SuiteReport::default() }
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.values().sum()
    }

    /// Counts one instance of `check`, recording a failure when `ok` is false.
    pub fn record(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(check.to_string()).or_default() += 1;
        if !ok {
            self.fail(format!("{check}: {}", detail()));
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn finish(mut self) -> Self {
        self.passed = self.failure_count == 0 && self.total_checks() > 0;
        self
    }
}

/// Runs a suite at the given bounds.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    cfg.validate()?;
    Ok(match suite {
        Suite::Frames => verify_frames(cfg, &[]),
        Suite::AlgebraClosure => verify_algebra_closure(cfg),
        Suite::Duality => verify_duality(cfg),
        Suite::Soundness => verify_soundness(cfg),
        Suite::Rewriter => verify_rewriter(cfg),
        Suite::Agreement => verify_agreement(cfg),
        Suite::Cards => verify_cards(cfg, &CardsFixture::builtin()),
        Suite::Identities => verify_identities(cfg),
    })
}

/// Frames of every size up to `max_worlds`: all of them when few enough, otherwise a sample.
pub(crate) fn frame_family(
    cfg: &SuiteConfig,
    agents: &[Agent],
    kinds: &[ModelKind],
    rng: &mut ChaCha8Rng,
    report: &mut SuiteReport,
) -> Vec<(ModelKind, Frame)> {
    let mut sampler = FrameSampler::new();
    let mut out = Vec::new();
    for &kind in kinds {
        for n in 1..=cfg.max_worlds {
            let count = count_frames(n, agents.len(), kind);
            if count <= EXHAUSTIVE_FRAMES {
                out.extend(frames(n, agents, kind).into_iter().map(|f| (kind, f)));
                report.note(format!("{kind} frames on {n} points, {} agents: all {count}", agents.len()));
            } else {
                out.extend((0..cfg.sample_count).map(|_| (kind, sampler.sample(rng, n, agents, kind))));
                report.note(format!(
                    "{kind} frames on {n} points, {} agents: {} sampled of {count}",
                    agents.len(),
                    cfg.sample_count
                ));
            }
        }
    }
    out
}

/// Relations on `k` states, as successor lists.
fn relations_on(k: usize, equivalence_only: bool) -> Vec<Vec<Vec<usize>>> {
    let pairs = k * k;
    (0u32..1 << pairs)
        .map(|m| (0..k).map(|i| (0..k).filter(|&j| m >> (i * k + j) & 1 == 1).collect::<Vec<_>>()).collect::<Vec<_>>())
        .filter(|succ: &Vec<Vec<usize>>| !equivalence_only || is_equivalence(succ))
        .collect()
}

/// Action shapes per frame before sampling kicks in.
const MAX_SHAPES: usize = 32;

/// Actions over `alg` with up to `cfg.max_action_states` states: every relation shape (or a
/// sample of them), each with all-`⊤` and with random preconditions.
pub(crate) fn algebra_actions(
    cfg: &SuiteConfig,
    alg: &TableAlgebra,
    equivalence_only: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<AlgebraAction> {
    let agents = alg.agents().len();
    let elems: Vec<u32> = (0..alg.len() as u32).collect();
    let top = alg.lattice().top();
    let mut out = Vec::new();
    for k in 1..=cfg.max_action_states {
        let rels = relations_on(k, equivalence_only);
        let total = rels.len().checked_pow(agents as u32).unwrap_or(usize::MAX);
        let shapes: Vec<Vec<Vec<Vec<usize>>>> = if total <= MAX_SHAPES {
            (0..agents).map(|_| rels.iter().cloned()).multi_cartesian_product().collect()
        } else {
            (0..MAX_SHAPES).map(|_| (0..agents).map(|_| rels.choose(rng).expect("relations").clone()).collect()).collect()
        };
        let shapes = if agents == 0 { vec![Vec::new()] } else { shapes };
        let states: Vec<String> = (0..k).map(|j| format!("s{j}")).collect();
        for succ in shapes {
            let random: Vec<Elem> = (0..k).map(|_| single(*elems.choose(rng).expect("nonempty"))).collect();
            for pre in [vec![single(top); k], random] {
                let d = rng.gen_range(0..k);
                out.push(AlgebraAction::from_parts("act", states.clone(), d, succ.clone(), pre).expect("well formed"));
            }
        }
    }
    out
}

pub(crate) fn single(x: u32) -> Elem {
    let mut e = Elem::new();
    e.push(x);
    e
}

/// Whether every relation of the action is an equivalence.
pub(crate) fn action_is_equivalence(a: &AlgebraAction) -> bool {
    a.succ.iter().all(|succ| is_equivalence(succ))
}

fn is_equivalence(succ: &[Vec<usize>]) -> bool {
    let k = succ.len();
    let has = |i: usize, j: usize| succ[i].contains(&j);
    (0..k).all(|i| has(i, i))
        && (0..k).all(|i| (0..k).all(|j| !has(i, j) || has(j, i)))
        && (0..k).all(|i| (0..k).all(|j| (0..k).all(|l| !(has(i, j) && has(j, l)) || has(i, l))))
}
