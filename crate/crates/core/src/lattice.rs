//! Finite complete lattices stored as dense binary join and meet tables.
//!
//! Elements are the indices `0..n`. Every order, join and meet query is a
//! single table lookup, which is what the cubic law checks downstream rely on.

use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Element of a finite carrier, identified by its index.
pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct SupLattice {
    n: usize,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: Elem,
    top: Elem,
    labels: Vec<String>,
    frame: OnceLock<Option<[Elem; 3]>>,
}

impl PartialEq for SupLattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.join == other.join && self.labels == other.labels
    }
}

impl Eq for SupLattice {}

impl SupLattice {
    /// Builds the lattice whose order is the reflexive-transitive closure of
    /// `covers`, where `(i, j)` means `i < j`.
    pub fn build(n: usize, covers: &[(Elem, Elem)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                s
            })
            .collect();
        for &(i, j) in covers {
            for &x in &[i, j] {
                if x >= n {
                    return Err(Error::OutOfRange { index: x, size: n });
                }
            }
            up[i].insert(j);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPoset(i.min(j), i.max(j)));
                }
            }
        }
        Self::from_up_sets(up)
    }

    /// Builds a lattice from an arbitrary order predicate on `0..n`.
    pub fn from_leq(n: usize, leq: impl Fn(Elem, Elem) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if leq(a, b) {
                    row.insert(b);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::NotAPoset(a, a));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotAPoset(a.min(b), a.max(b)));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::NotAPoset(a, b));
                }
            }
        }
        Self::from_up_sets(up)
    }

    /// Builds a lattice from a binary join table (`a ≤ b` iff `a ∨ b = b`).
    pub fn from_join_table(n: usize, join: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        Self::from_leq(n, |a, b| join(a, b) == b)
    }

    fn from_up_sets(up: Vec<FixedBitSet>) -> Result<Self> {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        let up_count: Vec<usize> = up.iter().map(|s| s.count_ones(..)).collect();
        let down_count: Vec<usize> = down.iter().map(|s| s.count_ones(..)).collect();
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        let mut common = FixedBitSet::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                common.clone_from(&up[a]);
                common.intersect_with(&up[b]);
                let size = common.count_ones(..);
                // The least upper bound is the unique common upper bound whose
                // own up-set is the whole set of common upper bounds.
                let j = common
                    .ones()
                    .find(|&u| up_count[u] == size)
                    .ok_or(Error::NotALattice(a, b, "join"))?;
                common.clone_from(&down[a]);
                common.intersect_with(&down[b]);
                let size = common.count_ones(..);
                let m = common
                    .ones()
                    .find(|&l| down_count[l] == size)
                    .ok_or(Error::NotALattice(a, b, "meet"))?;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        let bottom = (0..n).find(|&x| up_count[x] == n).expect("finite lattice has a bottom");
        let top = (0..n).find(|&x| down_count[x] == n).expect("finite lattice has a top");
        Ok(Self {
            n,
            join,
            meet,
            bottom,
            top,
            labels: (0..n).map(|i| i.to_string()).collect(),
            frame: OnceLock::new(),
        })
    }

    /// The powerset of a `k`-element set; element `m` is the subset with bitmask `m`.
    pub fn powerset(k: usize) -> Self {
        let n = 1usize << k;
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = (a | b) as u32;
                meet[a * n + b] = (a & b) as u32;
            }
        }
        let labels = (0..n)
            .map(|m| {
                let items: Vec<String> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        Self {
            n,
            join,
            meet,
            bottom: 0,
            top: n - 1,
            labels,
            frame: OnceLock::new(),
        }
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::build(n, &covers)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::TableShape {
                table: "labels",
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a lattice has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.n + b] as Elem
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.n + b] as Elem
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.join(a, b) == b
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.top
    }

    /// Least upper bound of `set`; the empty join is the bottom.
    pub fn join_all(&self, set: impl IntoIterator<Item = Elem>) -> Elem {
        set.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Greatest lower bound of `set`; the empty meet is the top.
    pub fn meet_all(&self, set: impl IntoIterator<Item = Elem>) -> Elem {
        set.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub(crate) fn join_row(&self, a: Elem) -> &[u32] {
        &self.join[a * self.n..(a + 1) * self.n]
    }

    pub(crate) fn meet_row(&self, a: Elem) -> &[u32] {
        &self.meet[a * self.n..(a + 1) * self.n]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    /// Index of the element carrying `label`, if any.
    pub fn find_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    /// Hasse diagram: all pairs `(a, b)` such that `b` covers `a`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.n;
        let mut strictly_up = vec![FixedBitSet::with_capacity(n); n];
        let mut strictly_down = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    strictly_up[a].insert(b);
                    strictly_down[b].insert(a);
                }
            }
        }
        let mut out = Vec::new();
        for a in 0..n {
            for b in strictly_up[a].ones() {
                if strictly_up[a].is_disjoint(&strictly_down[b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        (0..self.n)
            .filter(|&x| {
                let below = (0..self.n).filter(|&y| y != x && self.leq(y, x));
                self.join_all(below) != x
            })
            .collect()
    }

    /// The down-set `↓x` in increasing index order.
    pub fn down_set(&self, x: Elem) -> Vec<Elem> {
        (0..self.n).filter(|&y| self.leq(y, x)).collect()
    }

    /// First triple (lexicographic) violating `a∧(b∨c) = (a∧b)∨(a∧c)`.
    pub fn frame_witness(&self) -> Option<[Elem; 3]> {
        *self.frame.get_or_init(|| {
            let n = self.n;
            for a in 0..n {
                let meet_a = self.meet_row(a);
                for b in 0..n {
                    let join_b = self.join_row(b);
                    let ab = meet_a[b] as usize;
                    let join_ab = self.join_row(ab);
                    for c in 0..n {
                        let lhs = meet_a[join_b[c] as usize];
                        let rhs = join_ab[meet_a[c] as usize];
                        if lhs != rhs {
                            return Some([a, b, c]);
                        }
                    }
                }
            }
            None
        })
    }

    /// Finite distributivity, which for finite lattices is the frame law.
    pub fn is_frame(&self) -> bool {
        self.frame_witness().is_none()
    }

    /// All order automorphisms, as permutations `perm[x] = image of x`.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        self.isomorphisms_to(self)
    }

    /// All order isomorphisms onto `other`.
    pub fn isomorphisms_to(&self, other: &SupLattice) -> Vec<Vec<Elem>> {
        let n = self.n;
        if other.n != n {
            return Vec::new();
        }
        let rank = |l: &SupLattice, x: Elem| (0..n).filter(|&y| l.leq(y, x)).count();
        let ranks_a: Vec<usize> = (0..n).map(|x| rank(self, x)).collect();
        let ranks_b: Vec<usize> = (0..n).map(|x| rank(other, x)).collect();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            x: usize,
            a: &SupLattice,
            b: &SupLattice,
            ranks: (&[usize], &[usize]),
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let n = a.n;
            if x == n {
                out.push(perm.clone());
                return;
            }
            for y in 0..n {
                if used[y] || ranks.0[x] != ranks.1[y] {
                    continue;
                }
                let consistent = (0..x).all(|z| a.leq(z, x) == b.leq(perm[z], y) && a.leq(x, z) == b.leq(y, perm[z]));
                if consistent {
                    perm[x] = y;
                    used[y] = true;
                    go(x + 1, a, b, ranks, perm, used, out);
                    used[y] = false;
                    perm[x] = usize::MAX;
                }
            }
        }
        go(0, self, other, (&ranks_a, &ranks_b), &mut perm, &mut used, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> SupLattice {
        // 0 < e, 0 < a, e < 1, a < 1 with indices 0, e=1, a=2, 1=3
        SupLattice::build(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn one_point_lattice() {
        let l = SupLattice::build(1, &[]).unwrap();
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 0);
        assert!(l.is_frame());
    }

    #[test]
    fn diamond_joins_and_meets() {
        let l = diamond();
        assert_eq!(l.join_all([1, 2]), 3);
        assert_eq!(l.meet_all([1, 2]), 0);
        assert_eq!(l.join_all([]), 0);
        assert_eq!(l.meet_all([]), 3);
        for x in 0..4 {
            assert_eq!(l.join_all([x]), x);
            assert_eq!(l.meet_all([x, 3]), x);
        }
    }

    #[test]
    fn missing_top_is_reported_with_witness() {
        let err = SupLattice::build(3, &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice(1, 2, "join")), "{err:?}");
    }

    #[test]
    fn cycle_is_not_a_poset() {
        let err = SupLattice::build(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotAPoset(0, 1)));
    }

    #[test]
    fn frame_examples() {
        assert!(SupLattice::powerset(2).is_frame());
        assert!(diamond().is_frame());
        let m3 = SupLattice::build(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        let w = m3.frame_witness().expect("M3 is not distributive");
        let [a, b, c] = w;
        assert_ne!(m3.meet(a, m3.join(b, c)), m3.join(m3.meet(a, b), m3.meet(a, c)));
    }

    #[test]
    fn covers_round_trip() {
        let l = SupLattice::powerset(3);
        let rebuilt = SupLattice::build(8, &l.covers()).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(l.leq(a, b), rebuilt.leq(a, b));
            }
        }
    }

    #[test]
    fn join_irreducibles_of_powerset_are_atoms() {
        assert_eq!(SupLattice::powerset(3).join_irreducibles(), vec![1, 2, 4]);
        assert_eq!(diamond().join_irreducibles(), vec![1, 2]);
    }

    #[test]
    fn boolean_automorphisms() {
        assert_eq!(SupLattice::powerset(3).automorphisms().len(), 6);
        assert_eq!(diamond().automorphisms().len(), 2);
    }
}
