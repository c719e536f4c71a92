//! Command-line front end: file loading, subcommands and verification suites.

pub mod dot;
pub mod files;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ieak::algebra::{check_fsa, check_heyting, Hao};
use ieak::duality::{complex_algebra, prime_structure};
use ieak::relational::{check_ik_frame, product_update, Evaluator, ModelKind};
use ieak::rewriter::{equivalence_check, normalize_with, NormalizeOptions, Strategy, DEFAULT_MAX_STEPS};
use ieak::semantics::{eval_algebraic, validity, AlgebraicModel};
use ieak::suites::{example_regression, run_suite, verify_cards, verify_frames, CardsFixture, Suite, SuiteConfig};
use ieak::syntax::{parse_formula, print_formula, Agent, Env};

use files::{read_any, read_json, to_json, ActionsFile, AlgebraFile, AnyFile, ModelFile};

/// Card scenario fixtures shipped with the tool.
pub const CARDS_MODEL: &str = include_str!("../data/cards_model.json");
pub const CARDS_ACTIONS: &str = include_str!("../data/cards_actions.json");

#[derive(Debug, Parser)]
#[command(name = "ieak", version, about = "Epistemic actions over relational models and Heyting algebras")]
pub struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Classical,
    Ik,
    Mipc,
}

impl From<Mode> for ModelKind {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Classical => ModelKind::Classical,
            Mode::Ik => ModelKind::Ik,
            Mode::Mipc => ModelKind::Mipc,
        }
    }
}

#[derive(Debug, Args)]
pub struct EnvArgs {
    /// Action declarations (JSON).
    #[arg(long = "actions")]
    pub actions: Option<PathBuf>,
    /// Agents, comma separated, when no file declares them.
    #[arg(long, value_delimiter = ',')]
    pub agents: Vec<String>,
}

#[derive(Debug, Default, Args)]
pub struct Bounds {
    #[arg(long)]
    pub max_worlds: Option<usize>,
    #[arg(long)]
    pub max_action_states: Option<usize>,
    #[arg(long)]
    pub max_agents: Option<usize>,
    #[arg(long)]
    pub max_formula_depth: Option<usize>,
    /// Random samples where a family is too large to enumerate.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Bounds {
    pub fn config(&self, suite: Suite) -> SuiteConfig {
        let mut cfg = SuiteConfig::for_suite(suite);
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.max_worlds, self.max_worlds);
        set(&mut cfg.max_action_states, self.max_action_states);
        set(&mut cfg.max_agents, self.max_agents);
        set(&mut cfg.max_formula_depth, self.max_formula_depth);
        set(&mut cfg.sample_count, self.samples);
        if let Some(s) = self.seed {
            cfg.random_seed = s;
        }
        cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it in canonical form.
    Parse {
        formula: String,
        #[command(flatten)]
        env: EnvArgs,
    },
    /// Worlds of a model where a formula holds.
    Eval {
        formula: String,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        env: EnvArgs,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Value of a formula in an algebra under a valuation.
    EvalAlg {
        formula: String,
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        env: EnvArgs,
        /// Atom valuation, `p=element`; repeatable.
        #[arg(long = "val", value_parser = parse_assignment)]
        val: Vec<(String, String)>,
        /// Fail unless the value is this element (`top` and `bottom` name the bounds).
        #[arg(long)]
        expect: Option<String>,
        /// Check the formula is `top` under every valuation instead.
        #[arg(long, conflicts_with_all = ["val", "expect"])]
        all_valuations: bool,
    },
    /// Product update of a model by one or more actions, in order.
    Update {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        env: EnvArgs,
        #[arg(long = "action", required = true)]
        action: Vec<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Rewrite away dynamic modalities.
    Normalize {
        formula: String,
        #[command(flatten)]
        env: EnvArgs,
        /// Emit every rewrite step as JSON.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Also compare input and output on the bounded model bank.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
    /// Frame conditions of a model or frame file.
    CheckFrame {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Heyting and Fischer Servi (or monadic) laws of an algebra file.
    CheckAlgebra {
        #[arg(long)]
        algebra: PathBuf,
        /// Check the monadic laws too.
        #[arg(long)]
        mha: bool,
    },
    /// Complex algebra of a frame, or prime structure of an algebra.
    Dualize { file: PathBuf },
    /// Graphviz rendering of a model, frame or algebra.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        scenario: Scenario,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        bounds: Bounds,
        /// Extra frame files for the `frames` suite; each must satisfy its conditions.
        #[arg(long)]
        fixture: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Scenario {
    /// The three-card scenario: the worked example and the entailment check.
    Cards {
        /// Initial model; defaults to the shipped fixture.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Declarations of `alpha` and `beta`; defaults to the shipped fixture.
        #[arg(long)]
        actions: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
    },
}

fn parse_assignment(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(p, x)| (p.trim().to_string(), x.trim().to_string())).ok_or_else(|| format!("expected p=element, got `{s}`"))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

/// Whether the command's check succeeded; input errors are reported as `Err`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    fn of(ok: bool) -> Outcome {
        if ok {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 1,
        }
    }
}

/// Exit code for input and format errors.
pub const EXIT_INPUT: i32 = 2;

fn load_env(args: &EnvArgs, fallback: &[Agent]) -> Result<Env> {
    let agents: Vec<Agent> = if args.agents.is_empty() {
        fallback.to_vec()
    } else {
        args.agents.iter().map(|a| Agent::from(a.as_str())).collect()
    };
    match &args.actions {
        Some(path) => {
            let file: ActionsFile = read_json(path)?;
            Ok(file.env(&agents)?)
        }
        None => Ok(Env::new(agents)),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    to_json(v)
}

/// Runs a command and returns its output text.
pub fn run(cli: &Cli) -> Result<(String, Outcome)> {
    let json = cli.json;
    match &cli.command {
        Command::Parse { formula, env } => {
            let env = load_env(env, &[])?;
            let f = parse_formula(formula, &env)?;
            let text = print_formula(&f);
            if json {
                let v = json!({
                    "formula": text,
                    "ast": f,
                    "size": f.size(),
                    "modalDepth": f.modal_depth(),
                    "dynamicDepth": f.dynamic_depth(),
                    "static": f.is_static(),
                });
                Ok((pretty(&v), Outcome::Success))
            } else {
                Ok((format!("{text}\n"), Outcome::Success))
            }
        }
        Command::Eval { formula, model, env, mode } => {
            let mf: ModelFile = read_json(model)?;
            let m = mf.model(mode.map(Into::into))?;
            let env = load_env(env, m.frame().agents())?;
            let f = parse_formula(formula, &env)?;
            let ext = Evaluator::new(&m, &env).eval(&f)?;
            let worlds = m.frame().set_names(&ext);
            let all = ext.count_ones(..) == m.len();
            if json {
                let v = json!({ "formula": print_formula(&f), "kind": m.kind(), "worlds": worlds, "valid": all });
                Ok((pretty(&v), Outcome::Success))
            } else {
                Ok((format!("{}\n", worlds.join(" ")), Outcome::Success))
            }
        }
        Command::EvalAlg { formula, algebra, env, val, expect, all_valuations } => {
            let af: AlgebraFile = read_json(algebra)?;
            let t = af.algebra()?;
            let env = load_env(env, t.agents())?;
            let f = parse_formula(formula, &env)?;
            let alg: Arc<dyn Hao> = Arc::new(t.clone());
            if *all_valuations {
                let v = validity(alg, &env, &f)?;
                let text = if json {
                    pretty(&json!({ "formula": print_formula(&f), "valid": v.valid, "valuations": v.checked, "countervaluation": v.countervaluation }))
                } else if v.valid {
                    format!("valid ({} valuations)\n", v.checked)
                } else {
                    format!("not valid; countervaluation {:?}\n", v.countervaluation.unwrap_or_default())
                };
                return Ok((text, Outcome::of(v.valid)));
            }
            let mut valuation = BTreeMap::new();
            for (p, x) in val {
                valuation.insert(p.clone(), t.elem(x).with_context(|| format!("value of `{p}`"))?);
            }
            let m = AlgebraicModel::new(alg, valuation)?;
            let x = eval_algebraic(&m, &env, &f)?;
            let name = t.name(x[0]).to_string();
            let ok = match expect.as_deref() {
                None => true,
                Some("top") => x == t.top(),
                Some("bottom") => x == t.bot(),
                Some(e) => x == t.elem(e).with_context(|| "expected element")?,
            };
            let text = if json {
                pretty(&json!({ "formula": print_formula(&f), "value": name, "expected": expect, "ok": ok }))
            } else {
                format!("{name}\n")
            };
            Ok((text, Outcome::of(ok)))
        }
        Command::Update { model, env, action, mode } => {
            let mf: ModelFile = read_json(model)?;
            let mut m = mf.model(mode.map(Into::into))?;
            let env = load_env(env, m.frame().agents())?;
            for a in action {
                m = product_update(&m, &env, a)?.0;
            }
            Ok((to_json(&ModelFile::from_model(&m)), Outcome::Success))
        }
        Command::Normalize { formula, env, trace, strategy, max_steps, check, max_worlds } => {
            let env = load_env(env, &[])?;
            let f = parse_formula(formula, &env)?;
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::LeftmostInnermost,
                StrategyArg::Rightmost => Strategy::RightmostInnermost,
            };
            let (nf, steps) = normalize_with(&env, &f, NormalizeOptions { strategy, max_steps: *max_steps })?;
            let verdict = if *check {
                let bank = ieak::enumerate::BankConfig { max_worlds: *max_worlds, ..Default::default() };
                Some(equivalence_check(&env, &f, &nf, &bank)?)
            } else {
                None
            };
            let ok = verdict.as_ref().is_none_or(|v| v.equivalent);
            let text = if *trace || json {
                let mut v = json!({ "input": print_formula(&f), "normalForm": print_formula(&nf), "steps": steps.steps });
                if let Some(verdict) = &verdict {
                    v["equivalence"] = serde_json::to_value(verdict)?;
                }
                pretty(&v)
            } else {
                let mut s = format!("{}\n", print_formula(&nf));
                if let Some(v) = &verdict {
                    s.push_str(&format!(
                        "{} on {} models\n",
                        if v.equivalent { "equivalent" } else { "NOT equivalent" },
                        v.coverage.models
                    ));
                }
                s
            };
            Ok((text, Outcome::of(ok)))
        }
        Command::CheckFrame { model, mode } => {
            let mf: ModelFile = read_json(model)?;
            let frame = mf.frame()?;
            let kind = mf.resolve_kind(mode.map(Into::into));
            let report = check_ik_frame(&frame, kind);
            let text = if json {
                pretty(&json!({ "kind": kind, "valid": report.is_valid(), "violations": report.violations }))
            } else if report.is_valid() {
                format!("valid {kind} frame\n")
            } else {
                report.violations.iter().map(|v| format!("{v}\n")).collect()
            };
            Ok((text, Outcome::of(report.is_valid())))
        }
        Command::CheckAlgebra { algebra, mha } => {
            let t = read_json::<AlgebraFile>(algebra)?.algebra()?;
            let heyting = check_heyting(&t);
            let report = check_fsa(&t, *mha);
            let ok = heyting.is_none() && report.holds();
            let text = if json {
                pretty(&json!({ "heytingCounterexample": heyting, "laws": report, "holds": ok }))
            } else {
                let mut s = String::new();
                if let Some((x, y, z)) = &heyting {
                    s.push_str(&format!("Heyting identities fail at ({x}, {y}, {z})\n"));
                }
                for f in report.failures() {
                    s.push_str(&format!("{f}\n"));
                }
                if ok {
                    s.push_str(if *mha { "monadic Heyting algebra\n" } else { "Fischer Servi algebra\n" });
                }
                s
            };
            Ok((text, Outcome::of(ok)))
        }
        Command::Dualize { file } => match read_any(file)? {
            AnyFile::Model(mf) => {
                let frame = mf.frame()?;
                let c = complex_algebra(&frame)?;
                Ok((to_json(&AlgebraFile::from_algebra(&c.algebra)), Outcome::Success))
            }
            AnyFile::Algebra(af) => {
                let t = af.algebra()?;
                let ps = prime_structure(&t)?;
                let kind = if ps.frame.is_discrete() {
                    ModelKind::Classical
                } else if check_ik_frame(&ps.frame, ModelKind::Mipc).is_valid() {
                    ModelKind::Mipc
                } else {
                    ModelKind::Ik
                };
                Ok((to_json(&ModelFile::from_frame(&ps.frame, Some(kind))), Outcome::Success))
            }
        },
        Command::ExportDot { file, mode } => match read_any(file)? {
            AnyFile::Model(mf) => {
                if mf.valuation.is_empty() {
                    Ok((dot::frame_dot(&mf.frame()?, None), Outcome::Success))
                } else {
                    let m = mf.model(mode.map(Into::into))?;
                    Ok((dot::frame_dot(m.frame(), Some(&m)), Outcome::Success))
                }
            }
            AnyFile::Algebra(af) => Ok((dot::algebra_dot(&af.algebra()?), Outcome::Success)),
        },
        Command::Scenario { scenario: Scenario::Cards { model, actions, bounds } } => {
            let fx = cards_fixture(model.as_deref(), actions.as_deref())?;
            let cfg = bounds.config(Suite::Cards);
            cfg.validate()?;
            let example = example_regression(&fx)?;
            let report = verify_cards(&cfg, &fx);
            let ok = example.passed && report.passed;
            let text = if json {
                pretty(&json!({ "example": example, "entailment": report, "passed": ok }))
            } else {
                let mut s = String::new();
                for c in &example.checks {
                    let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
                    s.push_str(&format!("[{}] {}{detail}\n", if c.passed { "pass" } else { "FAIL" }, c.name));
                }
                s.push_str(&render_report(&report));
                s
            };
            Ok((text, Outcome::of(ok)))
        }
        Command::Verify { suite, bounds, fixture } => {
            let cfg = bounds.config(*suite);
            let report = if fixture.is_empty() {
                run_suite(*suite, &cfg)?
            } else {
                if *suite != Suite::Frames {
                    bail!("--fixture applies to the frames suite only");
                }
                cfg.validate()?;
                let mut extra = Vec::new();
                for path in fixture {
                    let mf: ModelFile = read_json(path)?;
                    let kind = mf.resolve_kind(None);
                    extra.push((path.display().to_string(), mf.frame()?, kind));
                }
                verify_frames(&cfg, &extra)
            };
            let text = if json { pretty(&report) } else { render_report(&report) };
            Ok((text, Outcome::of(report.passed)))
        }
    }
}

/// The card fixture from the given files, or the shipped ones.
pub fn cards_fixture(model: Option<&Path>, actions: Option<&Path>) -> Result<CardsFixture> {
    let mf: ModelFile = match model {
        Some(p) => read_json(p)?,
        None => files::parse_json(CARDS_MODEL, "cards_model.json")?,
    };
    let af: ActionsFile = match actions {
        Some(p) => read_json(p)?,
        None => files::parse_json(CARDS_ACTIONS, "cards_actions.json")?,
    };
    let model = mf.model(None)?;
    let env = af.env(model.frame().agents())?;
    let get = |name: &str| env.action(name).cloned().with_context(|| format!("the actions file must declare `{name}`"));
    Ok(CardsFixture { alpha: get("alpha")?, beta: get("beta")?, model })
}

fn render_report(r: &ieak::suites::SuiteReport) -> String {
    let mut s = format!(
        "{}: {} ({} checks, {} failures)\n",
        r.suite,
        if r.passed { "PASS" } else { "FAIL" },
        r.total_checks(),
        r.failure_count
    );
    for (k, v) in &r.checks {
        s.push_str(&format!("  {k}: {v}\n"));
    }
    for n in &r.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    for f in &r.failures {
        s.push_str(&format!("  failure: {f}\n"));
    }
    s
}
