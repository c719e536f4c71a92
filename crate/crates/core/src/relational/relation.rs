use fixedbitset::FixedBitSet;

/// A binary relation on `0..n`, stored as successor bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for row in &mut r.rows {
            row.insert_range(..);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    /// Relation whose bit `i*n+j` of `mask` says whether `(i,j)` is present.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                if mask >> (i * n + j) & 1 == 1 {
                    r.insert(i, j);
                }
            }
        }
        r
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn succ(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| self.rows[i].ones().map(move |j| (i, j))).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut r = Relation::empty(self.n);
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    /// Composition in diagrammatic order: `x (self;other) z` iff `x self y` and `y other z` for some `y`.
    pub fn then(&self, other: &Relation) -> Self {
        let mut r = Relation::empty(self.n);
        for i in 0..self.n {
            let mut row = FixedBitSet::with_capacity(self.n);
            for y in self.rows[i].ones() {
                row.union_with(&other.rows[y]);
            }
            r.rows[i] = row;
        }
        r
    }

    pub fn intersection(&self, other: &Relation) -> Self {
        let mut r = self.clone();
        for (a, b) in r.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
        r
    }

    pub fn union(&self, other: &Relation) -> Self {
        let mut r = self.clone();
        for (a, b) in r.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        r
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// First pair of `self` missing from `other`.
    pub fn first_missing_in(&self, other: &Relation) -> Option<(usize, usize)> {
        (0..self.n).find_map(|i| self.rows[i].difference(&other.rows[i]).next().map(|j| (i, j)))
    }

    /// `{x | x R y for some y in set}`.
    pub fn preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in 0..self.n {
            if !self.rows[i].is_disjoint(set) {
                out.insert(i);
            }
        }
        out
    }

    /// `{y | x R y for some x in set}`.
    pub fn image(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in set.ones() {
            out.union_with(&self.rows[i]);
        }
        out
    }

    /// `{x | every R-successor of x lies in set}`.
    pub fn universal_preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in 0..self.n {
            if self.rows[i].is_subset(set) {
                out.insert(i);
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(i, j)| self.contains(j, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.then(self).is_subset(self)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Restriction to the listed points, renumbered in the listed order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut r = Relation::empty(keep.len());
        for (a, &x) in keep.iter().enumerate() {
            for (b, &y) in keep.iter().enumerate() {
                if self.contains(x, y) {
                    r.insert(a, b);
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_diagrammatic() {
        let r = Relation::from_pairs(3, [(0, 1)]);
        let s = Relation::from_pairs(3, [(1, 2)]);
        assert_eq!(r.then(&s).pairs(), vec![(0, 2)]);
        assert!(s.then(&r).is_empty());
    }

    #[test]
    fn images() {
        let r = Relation::from_pairs(3, [(0, 1), (2, 1), (2, 0)]);
        let mut x = FixedBitSet::with_capacity(3);
        x.insert(1);
        assert_eq!(r.preimage(&x).ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(r.universal_preimage(&x).ones().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(r.image(&r.preimage(&x)).ones().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn mask_roundtrip() {
        let r = Relation::from_mask(2, 0b1001);
        assert_eq!(r, Relation::identity(2));
        assert!(Relation::full(3).is_equivalence());
    }
}
