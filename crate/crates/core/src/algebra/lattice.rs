use fixedbitset::FixedBitSet;

use super::AlgebraError;

/// A finite lattice given by its order, with meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bot: u32,
    top: u32,
}

impl Lattice {
    /// Builds the lattice from order pairs `(x, y)` meaning `x ≤ y`; reflexive and
    /// transitive closure is taken first.
    pub fn from_order(n: usize, pairs: &[(usize, usize)]) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::NotLattice("no elements".into()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(AlgebraError::NotPartialOrder("pair out of range".into()));
            }
            up[x].insert(y);
        }
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    let row = up[k].clone();
                    up[i].union_with(&row);
                }
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in up[x].ones() {
                if x != y && up[y].contains(x) {
                    return Err(AlgebraError::NotPartialOrder(format!("elements {x} and {y} are equivalent")));
                }
                down[y].insert(x);
            }
        }
        let extreme = |sets: &[FixedBitSet], bound: &FixedBitSet| -> Option<u32> {
            bound.ones().find(|&z| bound.is_subset(&sets[z])).map(|z| z as u32)
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let mut lower = down[x].clone();
                lower.intersect_with(&down[y]);
                let m = extreme(&down, &lower)
                    .ok_or_else(|| AlgebraError::NotLattice(format!("no meet of {x} and {y}")))?;
                let mut upper = up[x].clone();
                upper.intersect_with(&up[y]);
                let j = extreme(&up, &upper)
                    .ok_or_else(|| AlgebraError::NotLattice(format!("no join of {x} and {y}")))?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let all: FixedBitSet = {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert_range(..);
            s
        };
        let bot = extreme(&up, &all).ok_or_else(|| AlgebraError::NotLattice("no bottom".into()))?;
        let top = extreme(&down, &all).ok_or_else(|| AlgebraError::NotLattice("no top".into()))?;
        Ok(Lattice { n, up, down, meet, join, bot, top })
    }

    /// Assembles a lattice from precomputed tables without re-deriving them.
    pub(crate) fn from_raw(up: Vec<FixedBitSet>, meet: Vec<u32>, join: Vec<u32>, bot: u32, top: u32) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Lattice { n, up, down, meet, join, bot, top }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, x: u32, y: u32) -> bool {
        self.up[x as usize].contains(y as usize)
    }

    pub fn meet(&self, x: u32, y: u32) -> u32 {
        self.meet[x as usize * self.n + y as usize]
    }

    pub fn join(&self, x: u32, y: u32) -> u32 {
        self.join[x as usize * self.n + y as usize]
    }

    pub fn bot(&self) -> u32 {
        self.bot
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    /// `{y | x ≤ y}`.
    pub fn up_set(&self, x: u32) -> &FixedBitSet {
        &self.up[x as usize]
    }

    /// `{y | y ≤ x}`.
    pub fn down_set(&self, x: u32) -> &FixedBitSet {
        &self.down[x as usize]
    }

    /// Order pairs `(x, y)` with `x ≤ y` and `x ≠ y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|x| self.up[x].ones().filter(move |&y| y != x).map(move |y| (x, y))).collect()
    }

    /// Covering pairs of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| {
                !(0..self.n).any(|z| z != x && z != y && self.up[x].contains(z) && self.up[z].contains(y))
            })
            .collect()
    }
}

/// `y→z = ⋁{x | x∧y ≤ z}`, checked to be a witness of residuation.
pub fn heyting_implies(l: &Lattice, y: u32, z: u32) -> Result<u32, AlgebraError> {
    let cand = (0..l.n as u32)
        .filter(|&x| l.leq(l.meet(x, y), z))
        .fold(l.bot, |acc, x| l.join(acc, x));
    if l.leq(l.meet(cand, y), z) {
        Ok(cand)
    } else {
        Err(AlgebraError::NotHeyting(format!("no relative pseudocomplement of {y} in {z}")))
    }
}
