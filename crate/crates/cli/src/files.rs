//! JSON file formats for models, frames, action environments and algebras.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use ieak::algebra::{Hao, TableAlgebra};
use ieak::relational::{check_ik_frame, Frame, Model, ModelKind, Relation};
use ieak::syntax::{parse_formula, ActionStructure, Agent, DeclTable, Env};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{path}: {err}")]
    Json { path: String, err: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FileError {
    FileError::Invalid(msg.into())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path).map_err(|err| FileError::Io { path: path.display().to_string(), err })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, FileError> {
    serde_json::from_str(text).map_err(|err| FileError::Json { path: origin.to_string(), err })
}

/// A frame or model. `order` lists pairs `[x, y]` meaning `x ≤ y`; its reflexive closure is taken.
/// A missing `order` means the discrete order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ModelKind>,
    pub worlds: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<(String, String)>,
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub valuation: BTreeMap<String, Vec<String>>,
}

fn index_of(worlds: &[String], w: &str, what: &str) -> Result<usize, FileError> {
    worlds.iter().position(|v| v == w).ok_or_else(|| invalid(format!("{what}: unknown world `{w}`")))
}

impl ModelFile {
    pub fn frame(&self) -> Result<Frame, FileError> {
        let n = self.worlds.len();
        let mut order = Relation::identity(n);
        for (x, y) in &self.order {
            order.insert(index_of(&self.worlds, x, "order")?, index_of(&self.worlds, y, "order")?);
        }
        let mut agents = Vec::new();
        let mut rels = Vec::new();
        for (a, pairs) in &self.relations {
            let mut r = Relation::empty(n);
            for (x, y) in pairs {
                let what = format!("relation `{a}`");
                r.insert(index_of(&self.worlds, x, &what)?, index_of(&self.worlds, y, &what)?);
            }
            agents.push(Agent::from(a.as_str()));
            rels.push(r);
        }
        Frame::new(self.worlds.clone(), order, agents, rels).map_err(|e| invalid(e.to_string()))
    }

    /// Kind from `--mode`, else from the file, else classical for discrete orders and IK otherwise.
    pub fn resolve_kind(&self, mode: Option<ModelKind>) -> ModelKind {
        mode.or(self.kind).unwrap_or(if self.order.iter().all(|(x, y)| x == y) {
            ModelKind::Classical
        } else {
            ModelKind::Ik
        })
    }

    /// The model, after checking the frame conditions of its kind.
    pub fn model(&self, mode: Option<ModelKind>) -> Result<Model, FileError> {
        let kind = self.resolve_kind(mode);
        let frame = self.frame()?;
        let report = check_ik_frame(&frame, kind);
        if !report.is_valid() {
            let v: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            return Err(invalid(format!("not a {kind} frame: {}", v.join("; "))));
        }
        let mut val = BTreeMap::new();
        for (p, ws) in &self.valuation {
            let mut s = FixedBitSet::with_capacity(frame.len());
            for w in ws {
                s.insert(index_of(&self.worlds, w, &format!("valuation of `{p}`"))?);
            }
            val.insert(p.clone(), s);
        }
        Model::new(kind, frame, val).map_err(|e| invalid(e.to_string()))
    }

    pub fn from_frame(frame: &Frame, kind: Option<ModelKind>) -> ModelFile {
        let w = frame.worlds();
        let order = frame.order().pairs().into_iter().filter(|(x, y)| x != y).map(|(x, y)| (w[x].clone(), w[y].clone())).collect();
        let relations = frame
            .agents()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let pairs = frame.relation(i).pairs().into_iter().map(|(x, y)| (w[x].clone(), w[y].clone())).collect();
                (a.to_string(), pairs)
            })
            .collect();
        ModelFile { kind, worlds: w.to_vec(), order, relations, valuation: BTreeMap::new() }
    }

    pub fn from_model(model: &Model) -> ModelFile {
        let mut f = ModelFile::from_frame(model.frame(), Some(model.kind()));
        f.valuation = model.valuation().iter().map(|(p, s)| (p.clone(), model.frame().set_names(s))).collect();
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDecl {
    pub name: String,
    pub states: Vec<String>,
    pub designated: String,
    /// One relation per agent of the environment.
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    /// Precondition text per state; missing states get `true`.
    #[serde(default)]
    pub pre: BTreeMap<String, String>,
}

/// A set of mutually referring actions over a list of agents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionsFile {
    #[serde(default)]
    pub agents: Vec<String>,
    pub actions: Vec<ActionDecl>,
}

impl ActionsFile {
    /// Builds the environment; `fallback_agents` is used when the file lists none.
    pub fn env(&self, fallback_agents: &[Agent]) -> Result<Env, FileError> {
        let agents: Vec<Agent> = if self.agents.is_empty() {
            fallback_agents.to_vec()
        } else {
            self.agents.iter().map(|a| Agent::from(a.as_str())).collect()
        };
        let decls = DeclTable {
            agents: agents.clone(),
            states: self.actions.iter().map(|a| (a.name.clone(), a.states.clone())).collect(),
        };
        let mut actions = Vec::new();
        for a in &self.actions {
            let idx = |s: &str| {
                a.states
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| invalid(format!("action `{}`: unknown state `{s}`", a.name)))
            };
            let designated = idx(&a.designated)?;
            let mut rel = BTreeMap::new();
            for agent in &agents {
                let pairs = a
                    .relations
                    .get(agent.as_str())
                    .ok_or_else(|| invalid(format!("action `{}` has no relation for agent `{agent}`", a.name)))?;
                let pairs = pairs.iter().map(|(x, y)| Ok((idx(x)?, idx(y)?))).collect::<Result<Vec<_>, FileError>>()?;
                rel.insert(agent.clone(), pairs);
            }
            for s in a.pre.keys() {
                idx(s)?;
            }
            let pre = a
                .states
                .iter()
                .map(|s| match a.pre.get(s) {
                    Some(text) => parse_formula(text, &decls)
                        .map_err(|e| invalid(format!("action `{}`, precondition of `{s}`: {e}", a.name))),
                    None => Ok(ieak::syntax::Formula::top()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            actions.push(
                ActionStructure::new(a.name.clone(), a.states.clone(), designated, rel, pre)
                    .map_err(|e| invalid(e.to_string()))?,
            );
        }
        Env::with_actions(agents, actions).map_err(|e| invalid(e.to_string()))
    }
}

/// A finite HAO. `leq` pairs are closed reflexively and transitively; `dia` and `box` map every
/// element to an element for every agent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub dia: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(rename = "box", default)]
    pub boxes: BTreeMap<String, BTreeMap<String, String>>,
}

impl AlgebraFile {
    pub fn algebra(&self) -> Result<TableAlgebra, FileError> {
        let n = self.elements.len();
        let idx = |s: &str, what: &str| {
            self.elements.iter().position(|e| e == s).ok_or_else(|| invalid(format!("{what}: unknown element `{s}`")))
        };
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in &self.leq {
            le[idx(x, "leq")?][idx(y, "leq")?] = true;
        }
        for k in 0..n {
            let via = le[k].clone();
            for row in le.iter_mut().filter(|row| row[k]) {
                for (slot, &v) in row.iter_mut().zip(&via) {
                    *slot |= v;
                }
            }
        }
        let order: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| le[i][j]).collect();
        let agents: Vec<String> = self.dia.keys().chain(self.boxes.keys()).cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let table = |maps: &BTreeMap<String, BTreeMap<String, String>>, op: &str, agent: &str| {
            let map = maps.get(agent).ok_or_else(|| invalid(format!("no `{op}` table for agent `{agent}`")))?;
            self.elements
                .iter()
                .map(|e| {
                    let v = map.get(e).ok_or_else(|| invalid(format!("`{op}` of agent `{agent}` misses `{e}`")))?;
                    Ok(idx(v, op)? as u32)
                })
                .collect::<Result<Vec<u32>, FileError>>()
        };
        let dia = agents.iter().map(|a| table(&self.dia, "dia", a)).collect::<Result<Vec<_>, _>>()?;
        let boxt = agents.iter().map(|a| table(&self.boxes, "box", a)).collect::<Result<Vec<_>, _>>()?;
        TableAlgebra::from_order(
            self.elements.clone(),
            &order,
            agents.iter().map(|a| Agent::from(a.as_str())).collect(),
            dia,
            boxt,
        )
        .map_err(|e| invalid(e.to_string()))
    }

    pub fn from_algebra(t: &TableAlgebra) -> AlgebraFile {
        let n = t.len() as u32;
        let name = |x: u32| t.name(x).to_string();
        let leq = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && t.le(x, y) && !(0..n).any(|z| z != x && z != y && t.le(x, z) && t.le(z, y)))
            .map(|(x, y)| (name(x), name(y)))
            .collect();
        let tables = |op: &dyn Fn(usize, u32) -> u32| {
            t.agents()
                .iter()
                .enumerate()
                .map(|(i, a)| (a.to_string(), (0..n).map(|x| (name(x), name(op(i, x)))).collect()))
                .collect()
        };
        AlgebraFile {
            elements: t.names().to_vec(),
            leq,
            dia: tables(&|i, x| t.d(i, x)),
            boxes: tables(&|i, x| t.b(i, x)),
        }
    }
}

/// Any of the three file kinds, told apart by their keys.
#[derive(Clone, Debug)]
pub enum AnyFile {
    Model(ModelFile),
    Algebra(AlgebraFile),
}

pub fn read_any(path: &Path) -> Result<AnyFile, FileError> {
    let value: serde_json::Value = read_json(path)?;
    let origin = path.display().to_string();
    let json = |err| FileError::Json { path: origin.clone(), err };
    if value.get("elements").is_some() {
        Ok(AnyFile::Algebra(serde_json::from_value(value).map_err(json)?))
    } else if value.get("worlds").is_some() {
        Ok(AnyFile::Model(serde_json::from_value(value).map_err(json)?))
    } else {
        Err(invalid(format!("{origin}: expected a model/frame file (`worlds`) or an algebra file (`elements`)")))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
