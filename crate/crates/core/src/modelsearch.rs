//! Exhaustive search for involutive quantale structures on a small lattice.
//!
//! A join-preserving product is fixed by its values on pairs of
//! join-irreducibles, so the search branches only on those, one orbit of the
//! involution `(i, j) ↦ (j*, i*)` at a time, and prunes with associativity,
//! monotonicity and unit laws as soon as the values involved are known.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, SupLattice};
use crate::quantale::{Quantale, Requirement};

pub const DEFAULT_LATTICE_CAP: usize = 8;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub lattice: SupLattice,
    /// Fixed involution; when absent every involutive automorphism is tried.
    pub involution: Option<Vec<Elem>>,
    pub unit: Option<Elem>,
    pub require: Vec<Requirement>,
    pub limit: Option<usize>,
    /// Maximum number of values tried across all branch points.
    pub budget: u64,
    /// Keep one model per orbit of the lattice automorphisms.
    pub dedup: bool,
    pub lattice_cap: usize,
}

impl SearchSpec {
    pub fn new(lattice: SupLattice) -> Self {
        Self {
            lattice,
            involution: None,
            unit: None,
            require: Vec::new(),
            limit: None,
            budget: DEFAULT_BUDGET,
            dedup: false,
            lattice_cap: DEFAULT_LATTICE_CAP,
        }
    }

    pub fn trivial_involution(mut self) -> Self {
        self.involution = Some((0..self.lattice.len()).collect());
        self
    }

    pub fn unit(mut self, e: Elem) -> Self {
        self.unit = Some(e);
        self
    }

    pub fn require(mut self, r: Vec<Requirement>) -> Self {
        self.require = r;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Values tried at branch points.
    pub candidates: u64,
    /// Complete tables that passed the pruning constraints.
    pub leaves: u64,
    /// Leaves rejected by the full quantale check.
    pub invalid: u64,
    /// Valid quantales rejected by the requirements.
    pub filtered: u64,
    pub budget_exceeded: bool,
    pub limit_reached: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub models: Vec<Quantale>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    /// `Err(BudgetExceeded)` when the search stopped on its budget.
    pub fn complete(&self, budget: u64) -> Result<()> {
        if self.stats.budget_exceeded {
            return Err(Error::BudgetExceeded {
                budget,
                found: self.models.len(),
            });
        }
        Ok(())
    }
}

pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    let l = &spec.lattice;
    let n = l.len();
    if n > spec.lattice_cap {
        return Err(Error::Schema(format!(
            "lattice has {n} elements, cap is {}",
            spec.lattice_cap
        )));
    }
    if let Some(e) = spec.unit {
        if e >= n {
            return Err(Error::OutOfRange { index: e, size: n });
        }
    }
    let involutions: Vec<Vec<Elem>> = match &spec.involution {
        Some(inv) => {
            if inv.len() != n {
                return Err(Error::TableShape {
                    table: "inv",
                    expected: n,
                    found: inv.len(),
                });
            }
            if !l.automorphisms().contains(inv) || (0..n).any(|a| inv[inv[a]] != a) {
                return Err(Error::Schema(
                    "involution must be an involutive lattice automorphism".into(),
                ));
            }
            vec![inv.clone()]
        }
        None => l
            .automorphisms()
            .into_iter()
            .filter(|s| (0..n).all(|a| s[s[a]] == a))
            .collect(),
    };
    let mut out = SearchOutcome {
        models: Vec::new(),
        stats: SearchStats::default(),
    };
    let mut seen = HashSet::new();
    let autos = if spec.dedup { l.automorphisms() } else { Vec::new() };
    for inv in &involutions {
        let mut s = Search::new(spec, inv);
        let mut assign = vec![None; s.j.len() * s.j.len()];
        if !s.descend(0, &mut assign, &mut out, &autos, &mut seen) {
            break;
        }
    }
    Ok(out)
}

struct Search<'a> {
    spec: &'a SearchSpec,
    inv: &'a [Elem],
    /// Join-irreducibles.
    j: Vec<Elem>,
    /// `below[a]` = positions in `j` of the irreducibles under `a`.
    below: Vec<Vec<usize>>,
    /// One representative pair per orbit, with its partner.
    orbits: Vec<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(spec: &'a SearchSpec, inv: &'a [Elem]) -> Self {
        let l = &spec.lattice;
        let j = l.join_irreducibles();
        let k = j.len();
        let below = (0..l.len())
            .map(|a| (0..k).filter(|&p| l.leq(j[p], a)).collect())
            .collect();
        let pos = |x: Elem| j.iter().position(|&y| y == x).expect("automorphisms fix irreducibles");
        let mut orbits = Vec::new();
        let mut done = vec![false; k * k];
        for p in 0..k {
            for r in 0..k {
                if done[p * k + r] {
                    continue;
                }
                let partner = pos(inv[j[r]]) * k + pos(inv[j[p]]);
                done[p * k + r] = true;
                done[partner] = true;
                orbits.push((p * k + r, partner));
            }
        }
        Self {
            spec,
            inv,
            j,
            below,
            orbits,
        }
    }

    /// `a·b` from the values on irreducibles, if all of them are known.
    fn product(&self, assign: &[Option<Elem>], a: Elem, b: Elem) -> Option<Elem> {
        let l = &self.spec.lattice;
        let k = self.j.len();
        let mut acc = l.bottom();
        for &p in &self.below[a] {
            for &r in &self.below[b] {
                acc = l.join(acc, assign[p * k + r]?);
            }
        }
        Some(acc)
    }

    fn consistent(&self, assign: &[Option<Elem>]) -> bool {
        let l = &self.spec.lattice;
        let k = self.j.len();
        let j = &self.j;
        for p in 0..k {
            for r in 0..k {
                let Some(v) = assign[p * k + r] else { continue };
                // monotone in each argument on irreducibles
                for p2 in 0..k {
                    if p2 != p && l.leq(j[p], j[p2]) {
                        if let Some(w) = assign[p2 * k + r] {
                            if !l.leq(v, w) {
                                return false;
                            }
                        }
                    }
                }
                for r2 in 0..k {
                    if r2 != r && l.leq(j[r], j[r2]) {
                        if let Some(w) = assign[p * k + r2] {
                            if !l.leq(v, w) {
                                return false;
                            }
                        }
                    }
                }
                // the value must equal the product computed from the irreducibles below
                if let Some(w) = self.product(assign, j[p], j[r]) {
                    if w != v {
                        return false;
                    }
                }
                for s in 0..k {
                    let left = assign[r * k + s].and_then(|_| self.product(assign, v, j[s]));
                    let right = assign[r * k + s].and_then(|rs| self.product(assign, j[p], rs));
                    if let (Some(x), Some(y)) = (left, right) {
                        if x != y {
                            return false;
                        }
                    }
                }
            }
        }
        if let Some(e) = self.spec.unit {
            for &x in j {
                for (a, b) in [(e, x), (x, e)] {
                    if let Some(v) = self.product(assign, a, b) {
                        if v != x {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Returns false when the search must stop.
    fn descend(
        &mut self,
        depth: usize,
        assign: &mut Vec<Option<Elem>>,
        out: &mut SearchOutcome,
        autos: &[Vec<Elem>],
        seen: &mut HashSet<(Vec<Elem>, Vec<Elem>)>,
    ) -> bool {
        let l = &self.spec.lattice;
        if depth == self.orbits.len() {
            out.stats.leaves += 1;
            self.emit(assign, out, autos, seen);
            if self.spec.limit.is_some_and(|m| out.models.len() >= m) {
                out.stats.limit_reached = true;
                return false;
            }
            return true;
        }
        let (slot, partner) = self.orbits[depth];
        for v in 0..l.len() {
            if out.stats.candidates >= self.spec.budget {
                out.stats.budget_exceeded = true;
                return false;
            }
            out.stats.candidates += 1;
            assign[slot] = Some(v);
            assign[partner] = Some(self.inv[v]);
            if slot == partner && self.inv[v] != v {
                continue;
            }
            if self.consistent(assign) && !self.descend(depth + 1, assign, out, autos, seen) {
                assign[slot] = None;
                assign[partner] = None;
                return false;
            }
        }
        assign[slot] = None;
        assign[partner] = None;
        true
    }

    fn emit(
        &self,
        assign: &[Option<Elem>],
        out: &mut SearchOutcome,
        autos: &[Vec<Elem>],
        seen: &mut HashSet<(Vec<Elem>, Vec<Elem>)>,
    ) {
        let l = &self.spec.lattice;
        let n = l.len();
        let mul: Vec<Elem> = (0..n * n)
            .map(|ab| self.product(assign, ab / n, ab % n).expect("complete assignment"))
            .collect();
        let inv = self.inv.to_vec();
        let name = format!("model{}", out.models.len());
        let Ok(draft) = Quantale::new(name.clone(), l.clone(), mul.clone(), inv.clone(), None) else {
            out.stats.invalid += 1;
            return;
        };
        let unit = self.spec.unit.or_else(|| draft.detect_unit());
        let q = Quantale::new(name, l.clone(), mul.clone(), inv.clone(), unit).expect("same tables");
        if !q.validate().is_empty() {
            out.stats.invalid += 1;
            return;
        }
        let report = q.classify();
        if !self.spec.require.iter().all(|r| r.is_met(report)) {
            out.stats.filtered += 1;
            return;
        }
        if !autos.is_empty() {
            let canon = autos
                .iter()
                .map(|s| {
                    let mut m2 = vec![0; n * n];
                    let mut i2 = vec![0; n];
                    for a in 0..n {
                        i2[s[a]] = s[inv[a]];
                        for b in 0..n {
                            m2[s[a] * n + s[b]] = s[mul[a * n + b]];
                        }
                    }
                    (m2, i2)
                })
                .min()
                .expect("identity automorphism");
            if !seen.insert(canon) {
                return;
            }
        }
        out.models.push(q);
    }
}

/// A lattice isomorphism carrying one quantale onto the other, preserving
/// products, involution and unit.
pub fn isomorphism(a: &Quantale, b: &Quantale) -> Option<Vec<Elem>> {
    let n = a.len();
    a.lattice().isomorphisms_to(b.lattice()).into_iter().find(|s| {
        a.unit().map(|e| s[e]) == b.unit()
            && (0..n).all(|x| s[a.inv(x)] == b.inv(s[x]))
            && (0..n).all(|x| (0..n).all(|y| s[a.mul(x, y)] == b.mul(s[x], s[y])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_chain_has_two_models() {
        let out = search(&SearchSpec::new(catalog::chain(2))).unwrap();
        assert_eq!(out.models.len(), 2);
        assert!(!out.stats.budget_exceeded);
    }

    #[test]
    fn budget_is_reported() {
        let mut spec = SearchSpec::new(catalog::boolean(2));
        spec.budget = 3;
        let out = search(&spec).unwrap();
        assert!(out.stats.budget_exceeded);
        assert!(matches!(out.complete(3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn isomorphism_finds_identity() {
        let q = catalog::egger8();
        assert_eq!(isomorphism(&q, &q), Some((0..8).collect()));
    }
}
