use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Agent, Formula};
use super::{ActionRef, SyntaxError};

/// A finite pointed multi-agent action structure with formula preconditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionStructure {
    name: String,
    states: Vec<String>,
    designated: usize,
    succ: BTreeMap<Agent, Vec<Vec<usize>>>,
    pre: Vec<Formula>,
}

impl ActionStructure {
    /// Builds an action from indexed data. Relations are given as pairs of state indices.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        designated: usize,
        rel: BTreeMap<Agent, Vec<(usize, usize)>>,
        pre: Vec<Formula>,
    ) -> Result<Self, SyntaxError> {
        let name = name.into();
        let invalid = |reason: String| SyntaxError::InvalidAction { action: name.clone(), reason };
        if states.is_empty() {
            return Err(invalid("no states".into()));
        }
        let distinct: BTreeSet<&String> = states.iter().collect();
        if distinct.len() != states.len() {
            return Err(invalid("duplicate state label".into()));
        }
        if designated >= states.len() {
            return Err(invalid("designated state out of range".into()));
        }
        if pre.len() != states.len() {
            return Err(invalid("one precondition per state required".into()));
        }
        let n = states.len();
        let mut succ = BTreeMap::new();
        for (agent, pairs) in rel {
            let mut lists = vec![Vec::new(); n];
            for (i, j) in pairs {
                if i >= n || j >= n {
                    return Err(invalid(format!("relation for `{agent}` leaves the state set")));
                }
                lists[i].push(j);
            }
            for l in &mut lists {
                l.sort_unstable();
                l.dedup();
            }
            succ.insert(agent, lists);
        }
        Ok(ActionStructure { name, states, designated, succ, pre })
    }

    /// Builds an action from state labels.
    pub fn from_labels(
        name: impl Into<String>,
        states: &[&str],
        designated: &str,
        rel: &[(&str, &[(&str, &str)])],
        pre: &[(&str, Formula)],
    ) -> Result<Self, SyntaxError> {
        let name = name.into();
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            states.iter().position(|t| t == s).ok_or_else(|| SyntaxError::UnknownState {
                action: name.clone(),
                state: s.to_string(),
            })
        };
        let d = idx(designated)?;
        let mut r = BTreeMap::new();
        for (agent, pairs) in rel {
            let mut v = Vec::new();
            for (x, y) in pairs.iter() {
                v.push((idx(x)?, idx(y)?));
            }
            r.insert(Agent::from(*agent), v);
        }
        let mut p = vec![None; states.len()];
        for (s, f) in pre {
            p[idx(s)?] = Some(f.clone());
        }
        let pre = p
            .into_iter()
            .zip(&states)
            .map(|(f, s)| {
                f.ok_or_else(|| SyntaxError::InvalidAction {
                    action: name.clone(),
                    reason: format!("missing precondition for state `{s}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ActionStructure::new(name, states, d, r, pre)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn designated(&self) -> usize {
        self.designated
    }

    pub fn designated_label(&self) -> &str {
        &self.states[self.designated]
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.succ.keys()
    }

    /// Successors of state `j` for `agent`, or `None` if the action has no relation for that agent.
    pub fn succ(&self, agent: &Agent, j: usize) -> Option<&[usize]> {
        self.succ.get(agent).map(|l| l[j].as_slice())
    }

    pub fn has_edge(&self, agent: &Agent, i: usize, j: usize) -> bool {
        self.succ(agent, i).is_some_and(|s| s.binary_search(&j).is_ok())
    }

    /// All pairs of the relation for `agent`.
    pub fn pairs(&self, agent: &Agent) -> Vec<(usize, usize)> {
        self.succ
            .get(agent)
            .map(|l| {
                l.iter()
                    .enumerate()
                    .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn pre(&self, j: usize) -> &Formula {
        &self.pre[j]
    }

    pub fn preconditions(&self) -> &[Formula] {
        &self.pre
    }

    /// Same structure designated at another state.
    pub fn shift(&self, label: &str) -> Result<ActionStructure, SyntaxError> {
        let j = self.state_index(label).ok_or_else(|| SyntaxError::UnknownState {
            action: self.name.clone(),
            state: label.to_string(),
        })?;
        Ok(ActionStructure { designated: j, ..self.clone() })
    }

    /// Actions mentioned inside the preconditions.
    pub fn dependencies(&self) -> BTreeSet<String> {
        self.pre.iter().flat_map(|f| f.action_names()).collect()
    }
}

/// `α_j`: the action with its designated state moved to `j`.
pub fn shift_action(action: &ActionStructure, j: &str) -> Result<ActionStructure, SyntaxError> {
    action.shift(j)
}

/// Names visible to the parser: declared agents and actions with their states.
pub trait Signature {
    fn agents(&self) -> &[Agent];
    fn action_states(&self, name: &str) -> Option<Vec<String>>;
}

/// The ambient action environment: declared agents and an acyclic set of named actions.
#[derive(Clone, Debug, Default)]
pub struct Env {
    agents: Vec<Agent>,
    actions: BTreeMap<String, ActionStructure>,
}

impl Env {
    pub fn new(agents: Vec<Agent>) -> Self {
        let mut seen = BTreeSet::new();
        let agents = agents.into_iter().filter(|a| seen.insert(a.clone())).collect();
        Env { agents, actions: BTreeMap::new() }
    }

    /// Builds an environment from actions in any order, rejecting reference cycles.
    pub fn with_actions(
        agents: Vec<Agent>,
        actions: impl IntoIterator<Item = ActionStructure>,
    ) -> Result<Self, SyntaxError> {
        let mut env = Env::new(agents);
        let mut pending: BTreeMap<String, ActionStructure> = BTreeMap::new();
        for a in actions {
            let name = a.name.clone();
            if pending.insert(name.clone(), a).is_some() {
                return Err(SyntaxError::DuplicateAction(name));
            }
        }
        while !pending.is_empty() {
            let ready: Vec<String> = pending
                .iter()
                .filter(|(_, a)| a.dependencies().iter().all(|d| env.actions.contains_key(d)))
                .map(|(n, _)| n.clone())
                .collect();
            if ready.is_empty() {
                let missing: Vec<String> = pending
                    .values()
                    .flat_map(|a| a.dependencies())
                    .filter(|d| !env.actions.contains_key(d) && !pending.contains_key(d))
                    .collect();
                if let Some(m) = missing.into_iter().next() {
                    return Err(SyntaxError::UnresolvedAction(m));
                }
                return Err(SyntaxError::Cycle(pending.keys().cloned().collect()));
            }
            for n in ready {
                let a = pending.remove(&n).expect("ready action present");
                env.add_action(a)?;
            }
        }
        Ok(env)
    }

    /// Adds an action whose preconditions only mention already declared actions.
    pub fn add_action(&mut self, action: ActionStructure) -> Result<(), SyntaxError> {
        if self.actions.contains_key(&action.name) {
            return Err(SyntaxError::DuplicateAction(action.name.clone()));
        }
        for f in &action.pre {
            self.check_refs(f)?;
        }
        self.actions.insert(action.name.clone(), action);
        Ok(())
    }

    pub fn add_agent(&mut self, agent: Agent) {
        if !self.agents.contains(&agent) {
            self.agents.push(agent);
        }
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn action(&self, name: &str) -> Option<&ActionStructure> {
        self.actions.get(name)
    }

    pub fn actions(&self) -> impl Iterator<Item = &ActionStructure> {
        self.actions.values()
    }

    /// Resolves a reference to its action and the index of its designated state.
    pub fn resolve(&self, r: &ActionRef) -> Result<(&ActionStructure, usize), SyntaxError> {
        let a = self
            .actions
            .get(&r.name)
            .ok_or_else(|| SyntaxError::UnresolvedAction(r.name.clone()))?;
        let j = match &r.point {
            None => a.designated,
            Some(p) => a.state_index(p).ok_or_else(|| SyntaxError::UnknownState {
                action: r.name.clone(),
                state: p.clone(),
            })?,
        };
        Ok((a, j))
    }

    /// Reference to `name` designated at state index `j`; the plain name when `j` is the default.
    pub fn reference(&self, name: &str, j: usize) -> ActionRef {
        match self.actions.get(name) {
            Some(a) if a.designated == j => ActionRef::new(name),
            Some(a) => ActionRef::at(name, a.states[j].clone()),
            None => ActionRef::new(name),
        }
    }

    /// Checks that every action reference in `f` resolves.
    pub fn check_refs(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Atom(_) | Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                self.check_refs(a)?;
                self.check_refs(b)
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => self.check_refs(a),
            Formula::DynDia(r, a) | Formula::DynBox(r, a) => {
                self.resolve(r)?;
                self.check_refs(a)
            }
        }
    }
}

impl Signature for Env {
    fn agents(&self) -> &[Agent] {
        &self.agents
    }

    fn action_states(&self, name: &str) -> Option<Vec<String>> {
        self.actions.get(name).map(|a| a.states.clone())
    }
}

/// A bare table of action names and states, used to parse preconditions before the
/// environment itself exists.
#[derive(Clone, Debug, Default)]
pub struct DeclTable {
    pub agents: Vec<Agent>,
    pub states: BTreeMap<String, Vec<String>>,
}

impl Signature for DeclTable {
    fn agents(&self) -> &[Agent] {
        &self.agents
    }

    fn action_states(&self, name: &str) -> Option<Vec<String>> {
        self.states.get(name).cloned()
    }
}
