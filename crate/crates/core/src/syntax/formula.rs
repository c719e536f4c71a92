use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An agent label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Agent(String);

impl Agent {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Agent {
    fn from(s: &str) -> Self {
        Agent(s.to_string())
    }
}

impl From<String> for Agent {
    fn from(s: String) -> Self {
        Agent(s)
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// True for nonempty strings over `[a-zA-Z0-9_]`.
pub fn is_valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Words the parser treats specially; they cannot be used as atoms or agents.
pub const KEYWORDS: [&str; 5] = ["true", "false", "box", "dia", "E"];

/// Reference to a declared action, optionally with a shifted designated state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionRef {
    pub name: String,
    pub point: Option<String>,
}

impl ActionRef {
    pub fn new(name: impl Into<String>) -> Self {
        ActionRef { name: name.into(), point: None }
    }

    pub fn at(name: impl Into<String>, point: impl Into<String>) -> Self {
        ActionRef { name: name.into(), point: Some(point.into()) }
    }
}

impl From<&str> for ActionRef {
    fn from(name: &str) -> Self {
        ActionRef::new(name)
    }
}

impl fmt::Display for ActionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.point {
            None => f.write_str(&self.name),
            Some(p) => write!(f, "{}@{}", self.name, p),
        }
    }
}

/// IEAK formulas. `true`, negation, bi-implication and `E` are expanded into these nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Formula {
    Atom(String),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Box(Agent, Box<Formula>),
    Dia(Agent, Box<Formula>),
    DynDia(ActionRef, Box<Formula>),
    DynBox(ActionRef, Box<Formula>),
}

impl Formula {
    pub fn atom(p: impl Into<String>) -> Self {
        Formula::Atom(p.into())
    }

    pub fn top() -> Self {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    pub fn neg(f: Formula) -> Self {
        Formula::imp(f, Formula::Bot)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn boxed(agent: impl Into<Agent>, f: Formula) -> Self {
        Formula::Box(agent.into(), Box::new(f))
    }

    pub fn dia(agent: impl Into<Agent>, f: Formula) -> Self {
        Formula::Dia(agent.into(), Box::new(f))
    }

    pub fn dyn_dia(action: impl Into<ActionRef>, f: Formula) -> Self {
        Formula::DynDia(action.into(), Box::new(f))
    }

    pub fn dyn_box(action: impl Into<ActionRef>, f: Formula) -> Self {
        Formula::DynBox(action.into(), Box::new(f))
    }

    /// Left-folded conjunction; the empty conjunction is `true`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or_else(Formula::top)
    }

    /// Left-folded disjunction; the empty disjunction is `false`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    /// `E φ`: the conjunction of `box i φ` over the given agents, in order.
    pub fn everyone(agents: &[Agent], f: &Formula) -> Self {
        Formula::conj(agents.iter().map(|a| Formula::boxed(a.clone(), f.clone())))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Imp(a, b) if **a == Formula::Bot && **b == Formula::Bot)
    }

    pub fn is_static(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_static() && b.is_static()
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => a.is_static(),
            Formula::DynDia(..) | Formula::DynBox(..) => false,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(_, a) | Formula::Dia(_, a) | Formula::DynDia(_, a) | Formula::DynBox(_, a) => {
                1 + a.size()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(_, a) | Formula::Dia(_, a) | Formula::DynDia(_, a) | Formula::DynBox(_, a) => {
                1 + a.depth()
            }
        }
    }

    /// Maximal nesting of `box`/`dia` nodes.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => 1 + a.modal_depth(),
            Formula::DynDia(_, a) | Formula::DynBox(_, a) => a.modal_depth(),
        }
    }

    /// Maximal nesting of dynamic modalities (not counting preconditions).
    pub fn dynamic_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.dynamic_depth().max(b.dynamic_depth())
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => a.dynamic_depth(),
            Formula::DynDia(_, a) | Formula::DynBox(_, a) => 1 + a.dynamic_depth(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(_, a) | Formula::Dia(_, a) | Formula::DynDia(_, a) | Formula::DynBox(_, a) => {
                a.collect_atoms(out)
            }
        }
    }

    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<Agent>) {
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_agents(out);
                b.collect_agents(out);
            }
            Formula::Box(i, a) | Formula::Dia(i, a) => {
                out.insert(i.clone());
                a.collect_agents(out);
            }
            Formula::DynDia(_, a) | Formula::DynBox(_, a) => a.collect_agents(out),
        }
    }

    /// Names of actions referenced directly in this formula.
    pub fn action_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_actions(&mut out);
        out
    }

    fn collect_actions(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_actions(out);
                b.collect_actions(out);
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => a.collect_actions(out),
            Formula::DynDia(r, a) | Formula::DynBox(r, a) => {
                out.insert(r.name.clone());
                a.collect_actions(out);
            }
        }
    }

    /// Immediate subformula at a child index (0 = left/only, 1 = right).
    pub fn child(&self, i: usize) -> Option<&Formula> {
        match (self, i) {
            (Formula::And(a, _) | Formula::Or(a, _) | Formula::Imp(a, _), 0) => Some(a),
            (Formula::And(_, b) | Formula::Or(_, b) | Formula::Imp(_, b), 1) => Some(b),
            (
                Formula::Box(_, a) | Formula::Dia(_, a) | Formula::DynDia(_, a) | Formula::DynBox(_, a),
                0,
            ) => Some(a),
            _ => None,
        }
    }

    /// Subformula at a path of child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Formula> {
        path.iter().try_fold(self, |f, &i| f.child(i))
    }

    /// Replaces the subformula at `path`; returns `None` if the path is invalid.
    pub fn replace_at(&self, path: &[usize], new: Formula) -> Option<Formula> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let mut out = self.clone();
        let slot: &mut Box<Formula> = match (&mut out, i) {
            (Formula::And(a, _) | Formula::Or(a, _) | Formula::Imp(a, _), 0) => a,
            (Formula::And(_, b) | Formula::Or(_, b) | Formula::Imp(_, b), 1) => b,
            (
                Formula::Box(_, a) | Formula::Dia(_, a) | Formula::DynDia(_, a) | Formula::DynBox(_, a),
                0,
            ) => a,
            _ => return None,
        };
        **slot = slot.replace_at(rest, new)?;
        Some(out)
    }
}
