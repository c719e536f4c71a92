use serde::Serialize;

use super::table::TableAlgebra;
use super::Hao;

/// Inequalities checked per agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `□⊤ = ⊤`, `□(x∧y) = □x∧□y`, `□(x→y) ≤ □x→□y`.
    BoxNormal,
    /// `◇⊥ = ⊥`, `◇(x∨y) = ◇x∨◇y`.
    DiaNormal,
    /// `◇(x→y) ≤ □x→◇y`.
    Fs1,
    /// `◇x→□y ≤ □(x→y)`.
    Fs2,
    /// `□x ≤ x` and `x ≤ ◇x`.
    Reflexive,
    /// `◇x ≤ □◇x` and `◇□x ≤ □x`.
    Euclidean,
    /// `□(x→y) ≤ ◇x→◇y`.
    BoxDia,
}

impl Law {
    pub const FSA: [Law; 4] = [Law::BoxNormal, Law::DiaNormal, Law::Fs1, Law::Fs2];
    pub const MHA: [Law; 7] =
        [Law::BoxNormal, Law::DiaNormal, Law::Fs1, Law::Fs2, Law::Reflexive, Law::Euclidean, Law::BoxDia];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawVerdict {
    pub law: Law,
    pub holds: bool,
    /// Elements at which the law first fails.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgentVerdict {
    pub agent: String,
    pub laws: Vec<LawVerdict>,
}

/// Per-agent verdicts of [`check_fsa`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub mha: bool,
    pub agents: Vec<AgentVerdict>,
}

impl AlgebraReport {
    pub fn holds(&self) -> bool {
        self.agents.iter().all(|a| a.laws.iter().all(|l| l.holds))
    }

    pub fn verdict(&self, agent: &str, law: Law) -> Option<bool> {
        self.agents
            .iter()
            .find(|a| a.agent == agent)
            .and_then(|a| a.laws.iter().find(|l| l.law == law))
            .map(|l| l.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        self.agents
            .iter()
            .flat_map(|a| {
                a.laws.iter().filter(|l| !l.holds).map(move |l| match &l.witness {
                    Some((x, y)) => format!("agent {}: {:?} fails at ({x}, {y})", a.agent, l.law),
                    None => format!("agent {}: {:?} fails", a.agent, l.law),
                })
            })
            .collect()
    }
}

fn law_holds(t: &TableAlgebra, a: usize, law: Law, x: u32, y: u32) -> bool {
    let (top, bot) = (t.lattice().top(), t.lattice().bot());
    let le = |p, q| t.le(p, q);
    let (d, b) = (|v| t.d(a, v), |v| t.b(a, v));
    match law {
        Law::BoxNormal => {
            b(top) == top
                && b(t.m(x, y)) == t.m(b(x), b(y))
                && le(b(t.i(x, y)), t.i(b(x), b(y)))
        }
        Law::DiaNormal => d(bot) == bot && d(t.j(x, y)) == t.j(d(x), d(y)),
        Law::Fs1 => le(d(t.i(x, y)), t.i(b(x), d(y))),
        Law::Fs2 => le(t.i(d(x), b(y)), b(t.i(x, y))),
        Law::Reflexive => le(b(x), x) && le(x, d(x)),
        Law::Euclidean => le(d(x), b(d(x))) && le(d(b(x)), b(x)),
        Law::BoxDia => le(b(t.i(x, y)), t.i(d(x), d(y))),
    }
}

/// Scans all element pairs for the FSA inequalities, plus the MHA ones when `mha` is set.
pub fn check_fsa(t: &TableAlgebra, mha: bool) -> AlgebraReport {
    let laws: &[Law] = if mha { &Law::MHA } else { &Law::FSA };
    let n = t.len() as u32;
    let agents = t
        .agents()
        .iter()
        .enumerate()
        .map(|(a, agent)| {
            let laws = laws
                .iter()
                .map(|&law| {
                    let witness = (0..n)
                        .flat_map(|x| (0..n).map(move |y| (x, y)))
                        .find(|&(x, y)| !law_holds(t, a, law, x, y))
                        .map(|(x, y)| (t.name(x).to_string(), t.name(y).to_string()));
                    LawVerdict { law, holds: witness.is_none(), witness }
                })
                .collect();
            AgentVerdict { agent: agent.to_string(), laws }
        })
        .collect();
    AlgebraReport { mha, agents }
}

/// Checks residuation `x∧y ≤ z ⟺ x ≤ y→z` over all triples; returns a failing triple.
pub fn check_heyting(t: &TableAlgebra) -> Option<(String, String, String)> {
    let n = t.len() as u32;
    for x in 0..n {
        for y in 0..n {
            let m = t.m(x, y);
            for z in 0..n {
                if t.le(m, z) != t.le(x, t.i(y, z)) {
                    return Some((t.name(x).into(), t.name(y).into(), t.name(z).into()));
                }
            }
        }
    }
    None
}
