use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::Serialize;

use super::{Suite, SuiteConfig, SuiteReport};
use crate::enumerate::{random_valuation, rng, FrameSampler};
use crate::relational::{product_update, Evaluator, Frame, Model, ModelKind, RelationalError};
use crate::rewriter::normalize;
use crate::syntax::{ActionStructure, Agent, Env, Formula};

/// Largest world count of the exhaustive classical enumeration.
const MAX_EXHAUSTIVE_WORLDS: usize = 3;

/// The three-agent card scenario: the initial model and the two actions.
#[derive(Clone, Debug)]
pub struct CardsFixture {
    pub model: Model,
    pub alpha: ActionStructure,
    pub beta: ActionStructure,
}

impl CardsFixture {
    /// Worlds `Gb`, `Ga`, `Gc`; each agent confuses the two worlds where it holds white.
    /// `alpha`: `a` shows `c` its card; `beta`: `a` announces knowing its card.
    pub fn builtin() -> Self {
        let worlds: Vec<String> = ["Gb", "Ga", "Gc"].iter().map(|s| s.to_string()).collect();
        let sym = |x: usize, y: usize| {
            let mut r = crate::relational::Relation::identity(3);
            r.insert(x, y);
            r.insert(y, x);
            r
        };
        let agents = cards_agents();
        let frame = Frame::discrete(worlds, agents.clone(), vec![sym(0, 2), sym(1, 2), sym(0, 1)]).expect("frame");
        let mut val = BTreeMap::new();
        for (w, g) in ["Gb", "Ga", "Gc"].iter().enumerate() {
            let mut green = FixedBitSet::with_capacity(3);
            green.insert(w);
            let mut white = green.clone();
            white.toggle_range(..);
            val.insert(g.to_string(), green);
            val.insert(format!("W{}", &g[1..]), white);
        }
        let model = Model::new(ModelKind::Classical, frame, val).expect("model");
        let alpha = ActionStructure::from_labels(
            "alpha",
            &["k", "l"],
            "k",
            &[
                ("a", &[("k", "k"), ("l", "l")]),
                ("b", &[("k", "k"), ("l", "l")]),
                ("c", &[("k", "k"), ("k", "l"), ("l", "k"), ("l", "l")]),
            ],
            &[("k", Formula::atom("Ga")), ("l", Formula::atom("Wa"))],
        )
        .expect("alpha");
        let pre = Formula::conj(
            ["Ga", "Gb", "Gc"].iter().map(|g| Formula::imp(Formula::atom(*g), Formula::boxed("a", Formula::atom(*g)))),
        );
        let beta = ActionStructure::from_labels(
            "beta",
            &["s"],
            "s",
            &[("a", &[("s", "s")]), ("b", &[("s", "s")]), ("c", &[("s", "s")])],
            &[("s", pre)],
        )
        .expect("beta");
        CardsFixture { model, alpha, beta }
    }

    pub fn env(&self) -> Result<Env, crate::syntax::SyntaxError> {
        Env::with_actions(self.model.frame().agents().to_vec(), [self.alpha.clone(), self.beta.clone()])
    }
}

fn cards_agents() -> Vec<Agent> {
    ["a", "b", "c"].iter().map(|a| Agent::from(*a)).collect()
}

fn green(i: &Agent) -> String {
    format!("G{i}")
}

fn white(i: &Agent) -> String {
    format!("W{i}")
}

/// Hypotheses and goal of the scenario over the given agents.
#[derive(Clone, Debug)]
pub struct CardsFormulas {
    /// `⋀ᵢ((Wᵢ→⊥) ↔ Gᵢ)`
    pub aut: Formula,
    /// `⋁ᵢ(Gᵢ ∧ ⋀_{h≠i} W_h)`
    pub one: Formula,
    /// `⋀ᵢ(Wᵢ → ⋀_{h≠i} ◇ᵢG_h)`
    pub other: Formula,
    /// `E(other?)`
    pub everyone_other: Formula,
    /// `[α][β]□_c G_a`
    pub goal: Formula,
}

pub fn cards_hypotheses(agents: &[Agent]) -> CardsFormulas {
    let g = |i: &Agent| Formula::atom(green(i));
    let w = |i: &Agent| Formula::atom(white(i));
    let aut = Formula::conj(agents.iter().map(|i| Formula::iff(Formula::neg(w(i)), g(i))));
    let one = Formula::disj(
        agents.iter().map(|i| Formula::and(g(i), Formula::conj(agents.iter().filter(|h| *h != i).map(w)))),
    );
    let other = Formula::conj(agents.iter().map(|i| {
        Formula::imp(w(i), Formula::conj(agents.iter().filter(|h| *h != i).map(|h| Formula::dia(i.clone(), g(h)))))
    }));
    let everyone_other = Formula::everyone(agents, &other);
    let goal = Formula::dyn_box(
        "alpha",
        Formula::dyn_box("beta", Formula::boxed("c", Formula::atom("Ga"))),
    );
    CardsFormulas { aut, one, other, everyone_other, goal }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The figure-level facts of the worked example.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub intermediate_worlds: usize,
    pub updated_worlds: Vec<String>,
    pub updated_edges: BTreeMap<String, Vec<(String, String)>>,
    pub final_worlds: Vec<String>,
    pub checks: Vec<ExampleCheck>,
    pub passed: bool,
}

fn edge(m: &Model, agent: &str, x: &str, y: &str) -> bool {
    let f = m.frame();
    match (f.agent_index(&Agent::from(agent)), f.world_index(x), f.world_index(y)) {
        (Some(a), Some(i), Some(j)) => f.relation(a).contains(i, j) && f.relation(a).contains(j, i),
        _ => false,
    }
}

/// `∐_α M` has 6 worlds, `M^α` has worlds `(Ga,k)`, `(Gb,l)`, `(Gc,l)` with a `c`-edge between
/// `(Ga,k)` and `(Gb,l)`, an `a`-edge but no `c`-edge between `(Gb,l)` and `(Gc,l)`, and
/// `(M^α)^β` is a single world satisfying `Ga`.
pub fn example_regression(fx: &CardsFixture) -> Result<ExampleReport, RelationalError> {
    let env = fx.env()?;
    let (ma, trace) = product_update(&fx.model, &env, "alpha")?;
    let (mab, _) = product_update(&ma, &env, "beta")?;
    let ga = Evaluator::new(&mab, &env).eval(&Formula::atom("Ga"))?;
    let mut worlds = ma.frame().worlds().to_vec();
    worlds.sort();
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(ExampleCheck { name: name.to_string(), passed, detail });
    };
    check("intermediate has 6 worlds", trace.intermediate.len() == 6, format!("{}", trace.intermediate.len()));
    check(
        "update has worlds (Ga,k), (Gb,l), (Gc,l)",
        worlds == ["(Ga,k)", "(Gb,l)", "(Gc,l)"],
        format!("{worlds:?}"),
    );
    check("c-edge (Ga,k)–(Gb,l)", edge(&ma, "c", "(Ga,k)", "(Gb,l)"), String::new());
    check("a-edge (Gb,l)–(Gc,l)", edge(&ma, "a", "(Gb,l)", "(Gc,l)"), String::new());
    check("no c-edge (Gb,l)–(Gc,l)", !edge(&ma, "c", "(Gb,l)", "(Gc,l)"), String::new());
    check("second update has 1 world", mab.len() == 1, format!("{:?}", mab.frame().worlds()));
    check("second update satisfies Ga", mab.len() == 1 && ga.contains(0), format!("{:?}", mab.frame().set_names(&ga)));
    let updated_edges = ma
        .frame()
        .agents()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let f = ma.frame();
            let pairs = f
                .relation(i)
                .pairs()
                .into_iter()
                .filter(|(x, y)| x < y)
                .map(|(x, y)| (f.worlds()[x].clone(), f.worlds()[y].clone()))
                .collect();
            (a.to_string(), pairs)
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(ExampleReport {
        intermediate_worlds: trace.intermediate.len(),
        updated_worlds: worlds,
        updated_edges,
        final_worlds: mab.frame().worlds().to_vec(),
        checks,
        passed,
    })
}

/// Outcome of the entailment check on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CardsVerdict {
    /// `aut ∧ one` fails somewhere; the model is not counted.
    Skipped,
    /// Every world satisfying `E(other?)` satisfies the goal; `premise_worlds` of them.
    Holds { premise_worlds: usize },
    Counterexample { world: String },
}

/// Checks the entailment at every world of `model`, given the hypotheses hold globally.
pub fn cards_check_model(env: &Env, formulas: &CardsFormulas, model: &Model) -> Result<CardsVerdict, RelationalError> {
    let mut ev = Evaluator::new(model, env);
    let n = model.len();
    let aut = ev.eval(&formulas.aut)?;
    let one = ev.eval(&formulas.one)?;
    if aut.count_ones(..) != n || one.count_ones(..) != n {
        return Ok(CardsVerdict::Skipped);
    }
    let premise = ev.eval(&formulas.everyone_other)?;
    let goal = ev.eval(&formulas.goal)?;
    Ok(match premise.ones().find(|&w| !goal.contains(w)) {
        Some(w) => CardsVerdict::Counterexample { world: model.frame().worlds()[w].clone() },
        None => CardsVerdict::Holds { premise_worlds: premise.count_ones(..) },
    })
}

/// A static formula compiled to postorder nodes over bitmask worlds.
#[derive(Clone, Copy, Debug)]
enum Node {
    Atom(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Dia(usize, usize),
    Box(usize, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    atoms: Vec<String>,
}

impl Compiled {
    fn new(f: &Formula, agents: &[Agent]) -> Compiled {
        let mut c = Compiled { nodes: Vec::new(), atoms: Vec::new() };
        c.push(f, agents);
        c
    }

    fn push(&mut self, f: &Formula, agents: &[Agent]) -> usize {
        let agent = |a: &Agent| agents.iter().position(|b| b == a).expect("scenario agent");
        let node = match f {
            Formula::Atom(p) => {
                let i = self.atoms.iter().position(|q| q == p).unwrap_or_else(|| {
                    self.atoms.push(p.clone());
                    self.atoms.len() - 1
                });
                Node::Atom(i)
            }
            Formula::Bot => Node::Bot,
            Formula::And(a, b) => Node::And(self.push(a, agents), self.push(b, agents)),
            Formula::Or(a, b) => Node::Or(self.push(a, agents), self.push(b, agents)),
            Formula::Imp(a, b) => Node::Imp(self.push(a, agents), self.push(b, agents)),
            Formula::Dia(i, a) => Node::Dia(agent(i), self.push(a, agents)),
            Formula::Box(i, a) => Node::Box(agent(i), self.push(a, agents)),
            Formula::DynDia(..) | Formula::DynBox(..) => unreachable!("compiled formulas are static"),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Classical extension; `rel[i][w]` is the successor mask of `w` for agent `i`.
    fn eval(&self, n: usize, rel: &[&[u8]], val: &[u8], buf: &mut Vec<u8>) -> u8 {
        let full = ((1u16 << n) - 1) as u8;
        buf.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Atom(i) => val[i],
                Node::Bot => 0,
                Node::And(a, b) => buf[a] & buf[b],
                Node::Or(a, b) => buf[a] | buf[b],
                Node::Imp(a, b) => (!buf[a] | buf[b]) & full,
                Node::Dia(i, a) => dia(n, rel[i], buf[a]),
                Node::Box(i, a) => boxed(n, rel[i], buf[a]),
            };
            buf.push(v);
        }
        *buf.last().expect("nonempty formula")
    }
}

fn dia(n: usize, succ: &[u8], x: u8) -> u8 {
    (0..n).filter(|&w| succ[w] & x != 0).fold(0, |acc, w| acc | 1 << w)
}

fn boxed(n: usize, succ: &[u8], x: u8) -> u8 {
    (0..n).filter(|&w| succ[w] & !x == 0).fold(0, |acc, w| acc | 1 << w)
}

/// Per-agent part of `other?`: worlds where `Wᵢ → ⋀_{h≠i} ◇ᵢG_h`.
fn other_part(n: usize, i: usize, succ: &[u8], green: &[u8; 3]) -> u8 {
    let full = ((1u16 << n) - 1) as u8;
    let white = full & !green[i];
    let seen = (0..3).filter(|&h| h != i).fold(full, |acc, h| acc & dia(n, succ, green[h]));
    (!white | seen) & full
}

/// Green masks for the valuation `holder[w]` ∈ {0, 1, 2}.
fn greens(holder: &[usize]) -> [u8; 3] {
    let mut g = [0u8; 3];
    for (w, &i) in holder.iter().enumerate() {
        g[i] |= 1 << w;
    }
    g
}

/// Every relation on `n` points as successor masks.
fn all_relations(n: usize) -> Vec<Vec<u8>> {
    (0u32..1 << (n * n)).map(|m| (0..n).map(|w| ((m >> (w * n)) & ((1 << n) - 1)) as u8).collect()).collect()
}

fn describe_masks(n: usize, holder: &[usize], rels: &[&[u8]], world: usize) -> String {
    let names = ["a", "b", "c"];
    let rel = rels
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|w| (0..n).filter(move |v| s[w] >> v & 1 == 1).map(move |v| (w, v))).collect();
            format!("{}: {pairs:?}", names[i])
        })
        .collect::<Vec<_>>()
        .join(", ");
    let greens: Vec<&str> = holder.iter().map(|&i| names[i]).collect();
    format!("{n} worlds, green holders {greens:?}, relations {rel}, at world {world}")
}

#[derive(Default)]
struct Exhaustive {
    models: u128,
    premise_worlds: u128,
    counterexamples: u64,
    first: Option<String>,
}

/// Exhaustive check over all classical 3-agent models on `n` worlds satisfying `aut ∧ one`.
///
/// Agents absent from the goal's normal form enter only through `E(other?)`; for them the
/// achievable pairs (meet of `other?` parts, worlds where their box of it holds) are
/// tabulated once per valuation instead of being enumerated per model.
fn exhaustive_classical(n: usize, nf: &Compiled, free: usize) -> Exhaustive {
    let rels = all_relations(n);
    let full = ((1u16 << n) - 1) as u8;
    let bound: Vec<usize> = (0..3).filter(|&i| i != free).collect();
    let mut out = Exhaustive::default();
    let mut buf = Vec::new();
    let mut val = vec![0u8; nf.atoms.len()];
    for code in 0..3usize.pow(n as u32) {
        let holder: Vec<usize> = (0..n).map(|w| code / 3usize.pow(w as u32) % 3).collect();
        let g = greens(&holder);
        for (slot, p) in val.iter_mut().zip(&nf.atoms) {
            let i = ["a", "b", "c"].iter().position(|a| p[1..] == **a).expect("card atom");
            *slot = if p.starts_with('G') { g[i] } else { full & !g[i] };
        }
        // achievable[o_bound] = (O, box-part of the free agent, number of free relations, witness)
        let mut achievable: Vec<Vec<(u8, u8, u64, usize)>> = vec![Vec::new(); 1 << n];
        for (o_bound, slot) in achievable.iter_mut().enumerate() {
            let mut seen: BTreeMap<(u8, u8), (u64, usize)> = BTreeMap::new();
            for (ri, s) in rels.iter().enumerate() {
                let o = o_bound as u8 & other_part(n, free, s, &g);
                let hb = (0..n).filter(|&w| s[w] & !o == 0).fold(0u8, |acc, w| acc | 1 << w);
                seen.entry((o, hb)).or_insert((0, ri)).0 += 1;
            }
            *slot = seen.into_iter().map(|((o, hb), (cnt, wit))| (o, hb, cnt, wit)).collect();
        }
        for r0 in &rels {
            for r1 in &rels {
                let mut rel: [&[u8]; 3] = [&[], &[], &[]];
                rel[bound[0]] = r0;
                rel[bound[1]] = r1;
                rel[free] = &rels[0];
                let goal = nf.eval(n, &rel, &val, &mut buf);
                let fail = full & !goal;
                let o_bound = other_part(n, bound[0], r0, &g) & other_part(n, bound[1], r1, &g);
                for &(o, hb, cnt, wit) in &achievable[o_bound as usize] {
                    let hyp = hb
                        & (0..n).filter(|&w| r0[w] & !o == 0 && r1[w] & !o == 0).fold(0u8, |acc, w| acc | 1 << w);
                    out.premise_worlds += cnt as u128 * hyp.count_ones() as u128;
                    if hyp & fail != 0 {
                        out.counterexamples += cnt;
                        if out.first.is_none() {
                            rel[free] = &rels[wit];
                            out.first = Some(describe_masks(n, &holder, &rel, (hyp & fail).trailing_zeros() as usize));
                        }
                    }
                }
                out.models += rels.len() as u128;
            }
        }
    }
    out
}

/// Converts a classical scenario model to masks; `None` unless `Gᵢ`/`Wᵢ` encode one holder per world.
fn holder_of(model: &Model) -> Option<Vec<usize>> {
    let agents = cards_agents();
    (0..model.len())
        .map(|w| {
            let gs: Vec<usize> =
                (0..3).filter(|&i| model.val(&green(&agents[i])).is_some_and(|s| s.contains(w))).collect();
            let ws: Vec<usize> =
                (0..3).filter(|&i| model.val(&white(&agents[i])).is_some_and(|s| s.contains(w))).collect();
            (gs.len() == 1 && ws.len() == 2 && !ws.contains(&gs[0])).then(|| gs[0])
        })
        .collect()
}

fn masks_of(model: &Model) -> Vec<Vec<u8>> {
    let f = model.frame();
    (0..3).map(|i| (0..f.len()).map(|w| f.relation(i).succ(w).ones().fold(0u8, |acc, v| acc | 1 << v)).collect()).collect()
}

/// A valuation with one green holder per connected component of the order.
fn component_valuation(rng: &mut impl Rng, frame: &Frame) -> BTreeMap<String, FixedBitSet> {
    let n = frame.len();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for (x, y) in frame.order().pairs() {
            let m = comp[x].min(comp[y]);
            if comp[x] != m || comp[y] != m {
                comp[x] = m;
                comp[y] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let pick: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let agents = cards_agents();
    let mut val = BTreeMap::new();
    for (i, a) in agents.iter().enumerate() {
        let mut g = FixedBitSet::with_capacity(n);
        g.extend((0..n).filter(|&w| pick[comp[w]] == i));
        let mut wh = g.clone();
        wh.toggle_range(..);
        val.insert(green(a), g);
        val.insert(white(a), wh);
    }
    val
}

/// The worked example, the exhaustive classical check up to three worlds, an evaluator
/// cross-check on sampled classical models, and `sample_count` sampled IK models.
pub fn verify_cards(cfg: &SuiteConfig, fx: &CardsFixture) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Cards, cfg);
    report.note("the entailment is checked semantically, in the soundness direction, not by derivation");
    match example_regression(fx) {
        Ok(ex) => {
            for c in ex.checks {
                report.record("example", c.passed, || format!("{}: {}", c.name, c.detail));
            }
        }
        Err(e) => report.fail(format!("example: {e}")),
    }
    let env = match fx.env() {
        Ok(env) => env,
        Err(e) => {
            report.fail(format!("environment: {e}"));
            return report.finish();
        }
    };
    let agents = cards_agents();
    if env.agents() != agents.as_slice() {
        report.fail(format!("scenario agents must be a, b, c; got {:?}", env.agents()));
        return report.finish();
    }
    let formulas = cards_hypotheses(&agents);
    let nf = match normalize(&env, &formulas.goal) {
        Ok((nf, _)) => nf,
        Err(e) => {
            report.fail(format!("normalize goal: {e}"));
            return report.finish();
        }
    };
    let compiled = Compiled::new(&nf, &agents);
    let used = nf.agents();
    let free = (0..3).rev().find(|&i| !used.contains(&agents[i]));

    // Exhaustive classical models.
    let mut premise_total = 0u128;
    for n in 1..=cfg.max_worlds.min(MAX_EXHAUSTIVE_WORLDS) {
        let res = match free {
            Some(free) => exhaustive_classical(n, &compiled, free),
            None => {
                report.fail("goal mentions every agent; no factorized enumeration".into());
                break;
            }
        };
        *report.checks.entry("classical-exhaustive-models".into()).or_default() += res.models as u64;
        premise_total += res.premise_worlds;
        if res.counterexamples > 0 {
            report.fail(format!(
                "classical-exhaustive: {} counterexamples on {n} worlds, e.g. {}",
                res.counterexamples,
                res.first.unwrap_or_default()
            ));
        }
        report.note(format!("classical models on {n} worlds: {} with aut ∧ one", res.models));
    }
    report.note(format!("classical (model, world) pairs satisfying E(other?): {premise_total}"));
    if cfg.max_worlds > MAX_EXHAUSTIVE_WORLDS {
        report.note(format!("classical enumeration stops at {MAX_EXHAUSTIVE_WORLDS} worlds"));
    }

    // Cross-check of the bitmask computation against the evaluator, and the sampled IK models.
    let mut r = rng(cfg.random_seed);
    let mut sampler = FrameSampler::new();
    let atoms: Vec<String> = agents.iter().flat_map(|a| [green(a), white(a)]).collect();
    let mut skipped = 0u64;
    for kind in [ModelKind::Classical, ModelKind::Ik] {
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < cfg.sample_count && attempts < 100 * cfg.sample_count {
            attempts += 1;
            let n = r.gen_range(1..=cfg.max_worlds.min(MAX_EXHAUSTIVE_WORLDS));
            let frame = sampler.sample(&mut r, n, &agents, kind);
            let val = if r.gen_bool(0.5) { component_valuation(&mut r, &frame) } else { random_valuation(&mut r, &frame, &atoms) };
            let model = Model::new(kind, frame, val).expect("downset valuation");
            let verdict = match cards_check_model(&env, &formulas, &model) {
                Ok(v) => v,
                Err(e) => {
                    report.fail(format!("{kind} sample: {e}"));
                    continue;
                }
            };
            let label = if kind == ModelKind::Classical { "classical-sampled" } else { "ik-sampled" };
            match &verdict {
                CardsVerdict::Skipped => {
                    skipped += 1;
                    continue;
                }
                CardsVerdict::Holds { .. } => report.record(label, true, String::new),
                CardsVerdict::Counterexample { world } => report.record(label, false, || {
                    format!("world {world} of {:?} order {:?}", model.frame().worlds(), model.frame().order().pairs())
                }),
            }
            accepted += 1;
            if kind == ModelKind::Classical {
                let holder = holder_of(&model).expect("hypotheses fix one holder per world");
                let masks = masks_of(&model);
                let rel: Vec<&[u8]> = masks.iter().map(Vec::as_slice).collect();
                let n = model.len();
                let g = greens(&holder);
                let mut vals = vec![0u8; compiled.atoms.len()];
                for (slot, p) in vals.iter_mut().zip(&compiled.atoms) {
                    let i = ["a", "b", "c"].iter().position(|a| p[1..] == **a).expect("card atom");
                    *slot = if p.starts_with('G') { g[i] } else { ((1u16 << n) - 1) as u8 & !g[i] };
                }
                let mut buf = Vec::new();
                let goal_mask = compiled.eval(n, &rel, &vals, &mut buf);
                let o = (0..3).fold(u8::MAX, |acc, i| acc & other_part(n, i, rel[i], &g));
                let hyp = (0..n).filter(|&w| (0..3).all(|i| rel[i][w] & !o == 0)).fold(0u8, |acc, w| acc | 1 << w);
                let mut ev = Evaluator::new(&model, &env);
                let to_mask = |s: FixedBitSet| s.ones().fold(0u8, |acc, w| acc | 1 << w);
                let agree = ev.eval(&formulas.goal).map(to_mask).ok() == Some(goal_mask)
                    && ev.eval(&formulas.everyone_other).map(to_mask).ok() == Some(hyp);
                report.record("mask-agreement", agree, || format!("{:?}", model.frame().relations()));
            }
        }
        if accepted < cfg.sample_count {
            report.fail(format!("only {accepted} {kind} models satisfied the hypotheses"));
        }
    }
    report.note(format!("{skipped} sampled models violated aut ∧ one and were skipped"));
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_table_sizes() {
        assert_eq!(all_relations(1).len(), 2);
        assert_eq!(all_relations(2).len(), 16);
        assert_eq!(all_relations(2)[0b1001], vec![0b01, 0b10]);
    }

    #[test]
    fn mask_modalities() {
        // 0 → 1, 1 → 1, 2 → nothing
        let succ = [0b010, 0b010, 0b000];
        assert_eq!(dia(3, &succ, 0b010), 0b011);
        assert_eq!(boxed(3, &succ, 0b000), 0b100);
        assert_eq!(boxed(3, &succ, 0b010), 0b111);
    }

    #[test]
    fn other_part_needs_both_greens() {
        // a holds green at world 0; at worlds 1, 2 agent a must see green b and green c.
        let g = greens(&[0, 1, 2]);
        let sees_all = [0b111, 0b111, 0b111];
        assert_eq!(other_part(3, 0, &sees_all, &g), 0b111);
        let blind = [0b001, 0b010, 0b100];
        assert_eq!(other_part(3, 0, &blind, &g), 0b001);
    }
}
