use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::lattice::{heyting_implies, Lattice};
use super::{single, AlgebraError, Elem, Hao};
use crate::syntax::Agent;

/// Largest algebra that will be tabulated.
pub const MAX_TABLE_SIZE: usize = 4096;

/// A finite HAO given by operation tables over named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableAlgebra {
    names: Vec<String>,
    index: HashMap<String, u32>,
    agents: Vec<Agent>,
    lattice: Lattice,
    imp: Vec<u32>,
    dia: Vec<Vec<u32>>,
    boxt: Vec<Vec<u32>>,
    tense: Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)>,
}

impl TableAlgebra {
    /// Derives meets, joins and the Heyting implication from the order and
    /// verifies residuation. `dia[i][x]` and `boxt[i][x]` give the modal tables.
    pub fn from_order(
        names: Vec<String>,
        order: &[(usize, usize)],
        agents: Vec<Agent>,
        dia: Vec<Vec<u32>>,
        boxt: Vec<Vec<u32>>,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n > MAX_TABLE_SIZE {
            return Err(AlgebraError::TooLarge { size: n.to_string(), cap: MAX_TABLE_SIZE });
        }
        let lattice = Lattice::from_order(n, order)?;
        let mut imp = vec![0; n * n];
        for y in 0..n as u32 {
            for z in 0..n as u32 {
                imp[(y * n as u32 + z) as usize] = heyting_implies(&lattice, y, z)?;
            }
        }
        TableAlgebra::from_parts(names, agents, lattice, imp, dia, boxt)
    }

    fn from_parts(
        names: Vec<String>,
        agents: Vec<Agent>,
        lattice: Lattice,
        imp: Vec<u32>,
        dia: Vec<Vec<u32>>,
        boxt: Vec<Vec<u32>>,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        if dia.len() != agents.len() || boxt.len() != agents.len() {
            return Err(AlgebraError::Invalid("one diamond and one box table per agent required".into()));
        }
        if dia.iter().chain(&boxt).any(|t| t.len() != n || t.iter().any(|&v| v as usize >= n)) {
            return Err(AlgebraError::Invalid("modal table has the wrong size or leaves the carrier".into()));
        }
        let mut index = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(AlgebraError::Invalid(format!("duplicate element `{s}`")));
            }
        }
        Ok(TableAlgebra { names, index, agents, lattice, imp, dia, boxt, tense: None })
    }

    /// Tabulates any algebra; returns the table algebra and the source element of each index.
    pub fn materialize(alg: &dyn Hao) -> Result<(TableAlgebra, Vec<Elem>), AlgebraError> {
        let size = alg.size();
        match size {
            Some(s) if s <= MAX_TABLE_SIZE => {}
            _ => {
                return Err(AlgebraError::TooLarge {
                    size: size.map_or_else(|| "more than usize::MAX".to_string(), |s| s.to_string()),
                    cap: MAX_TABLE_SIZE,
                })
            }
        }
        let elems = alg.elements();
        let n = elems.len();
        let pos: HashMap<&[u32], u32> = elems.iter().enumerate().map(|(i, e)| (e.as_slice(), i as u32)).collect();
        let idx = |e: &Elem| -> Result<u32, AlgebraError> {
            pos.get(e.as_slice())
                .copied()
                .ok_or_else(|| AlgebraError::Invalid(format!("operation leaves the carrier: {}", alg.label(e))))
        };
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut imp = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                if alg.leq(x, y) {
                    up[i].insert(j);
                }
                imp[i * n + j] = idx(&alg.imp(x, y))?;
                meet[i * n + j] = idx(&alg.meet(x, y))?;
                join[i * n + j] = idx(&alg.join(x, y))?;
            }
        }
        let lattice = Lattice::from_raw(up, meet, join, idx(&alg.bot())?, idx(&alg.top())?);
        let k = alg.agents().len();
        let mut dia = vec![vec![0; n]; k];
        let mut boxt = vec![vec![0; n]; k];
        for a in 0..k {
            for (i, x) in elems.iter().enumerate() {
                dia[a][i] = idx(&alg.dia(a, x))?;
                boxt[a][i] = idx(&alg.boxed(a, x))?;
            }
        }
        let names = elems.iter().map(|e| alg.label(e)).collect();
        let t = TableAlgebra::from_parts(names, alg.agents().to_vec(), lattice, imp, dia, boxt)?;
        Ok((t, elems))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: u32) -> &str {
        &self.names[x as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn elem(&self, name: &str) -> Result<Elem, AlgebraError> {
        self.index_of(name).map(single).ok_or_else(|| AlgebraError::UnknownElement(name.to_string()))
    }

    pub fn le(&self, x: u32, y: u32) -> bool {
        self.lattice.leq(x, y)
    }

    pub fn m(&self, x: u32, y: u32) -> u32 {
        self.lattice.meet(x, y)
    }

    pub fn j(&self, x: u32, y: u32) -> u32 {
        self.lattice.join(x, y)
    }

    pub fn i(&self, x: u32, y: u32) -> u32 {
        self.imp[x as usize * self.len() + y as usize]
    }

    pub fn d(&self, a: usize, x: u32) -> u32 {
        self.dia[a][x as usize]
    }

    pub fn b(&self, a: usize, x: u32) -> u32 {
        self.boxt[a][x as usize]
    }

    pub fn dia_table(&self, a: usize) -> &[u32] {
        &self.dia[a]
    }

    pub fn box_table(&self, a: usize) -> &[u32] {
        &self.boxt[a]
    }

    pub fn has_tense(&self) -> bool {
        self.tense.is_some()
    }

    /// `◆` (left adjoint of `□`), from the table when present.
    pub fn bd(&self, a: usize, x: u32) -> u32 {
        match &self.tense {
            Some((bd, _)) => bd[a][x as usize],
            None => self.black_dia(a, &[x])[0],
        }
    }

    /// `■` (right adjoint of `◇`), from the table when present.
    pub fn bb(&self, a: usize, x: u32) -> u32 {
        match &self.tense {
            Some((_, bb)) => bb[a][x as usize],
            None => self.black_box(a, &[x])[0],
        }
    }
}

impl Hao for TableAlgebra {
    fn agents(&self) -> &[Agent] {
        &self.agents
    }

    fn width(&self) -> usize {
        1
    }

    fn bot(&self) -> Elem {
        single(self.lattice.bot())
    }

    fn top(&self) -> Elem {
        single(self.lattice.top())
    }

    fn leq(&self, x: &[u32], y: &[u32]) -> bool {
        self.lattice.leq(x[0], y[0])
    }

    fn meet(&self, x: &[u32], y: &[u32]) -> Elem {
        single(self.lattice.meet(x[0], y[0]))
    }

    fn join(&self, x: &[u32], y: &[u32]) -> Elem {
        single(self.lattice.join(x[0], y[0]))
    }

    fn imp(&self, x: &[u32], y: &[u32]) -> Elem {
        single(self.i(x[0], y[0]))
    }

    fn dia(&self, agent: usize, x: &[u32]) -> Elem {
        single(self.dia[agent][x[0] as usize])
    }

    fn boxed(&self, agent: usize, x: &[u32]) -> Elem {
        single(self.boxt[agent][x[0] as usize])
    }

    fn elements(&self) -> Vec<Elem> {
        (0..self.len() as u32).map(single).collect()
    }

    fn size(&self) -> Option<usize> {
        Some(self.len())
    }

    fn label(&self, x: &[u32]) -> String {
        self.names[x[0] as usize].clone()
    }

    fn contains(&self, x: &[u32]) -> bool {
        x.len() == 1 && (x[0] as usize) < self.len()
    }

    fn black_dia(&self, agent: usize, x: &[u32]) -> Elem {
        if let Some((bd, _)) = &self.tense {
            return single(bd[agent][x[0] as usize]);
        }
        let top = self.lattice.top();
        single((0..self.len() as u32).filter(|&y| self.le(x[0], self.b(agent, y))).fold(top, |acc, y| self.m(acc, y)))
    }

    fn black_box(&self, agent: usize, y: &[u32]) -> Elem {
        if let Some((_, bb)) = &self.tense {
            return single(bb[agent][y[0] as usize]);
        }
        let bot = self.lattice.bot();
        single((0..self.len() as u32).filter(|&x| self.le(self.d(agent, x), y[0])).fold(bot, |acc, x| self.j(acc, x)))
    }
}

/// Fills in `◆` and `■` and verifies `◇x ≤ y ⟺ x ≤ ■y` and `◆x ≤ y ⟺ x ≤ □y` for all pairs.
pub fn tense_adjoints(alg: &TableAlgebra) -> Result<TableAlgebra, AlgebraError> {
    let n = alg.len() as u32;
    let k = alg.agents.len();
    let mut bd = vec![vec![0; n as usize]; k];
    let mut bb = vec![vec![0; n as usize]; k];
    let plain = TableAlgebra { tense: None, ..alg.clone() };
    for a in 0..k {
        for x in 0..n {
            bd[a][x as usize] = plain.black_dia(a, &[x])[0];
            bb[a][x as usize] = plain.black_box(a, &[x])[0];
        }
        for x in 0..n {
            for y in 0..n {
                if alg.le(alg.d(a, x), y) != alg.le(x, bb[a][y as usize]) {
                    return Err(AlgebraError::Adjunction {
                        agent: alg.agents[a].to_string(),
                        detail: format!("◇ has no right adjoint (at {}, {})", alg.name(x), alg.name(y)),
                    });
                }
                if alg.le(bd[a][x as usize], y) != alg.le(x, alg.b(a, y)) {
                    return Err(AlgebraError::Adjunction {
                        agent: alg.agents[a].to_string(),
                        detail: format!("□ has no left adjoint (at {}, {})", alg.name(x), alg.name(y)),
                    });
                }
            }
        }
    }
    Ok(TableAlgebra { tense: Some((bd, bb)), ..plain })
}
