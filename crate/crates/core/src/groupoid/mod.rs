//! Finite discrete groupoids, their quantales of arrow sets, actions, and
//! the passage from actions to Q-sheaves.

mod action;
mod equivalence;
mod sheafify;

pub use action::{catalog_actions, module_from_action, ActionModule, GroupoidAction};
pub use equivalence::{equivariant_maps, sheaf_homs, verify_equivalence, EquivalenceReport, PairReport};
pub use sheafify::{sheafify, sheafify_action, EtaleLocale, Sheafification};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::quantale::Quantale;

/// Arrow sets are bitmasks in a `u32` and the quantale has `2^|G1|` elements.
pub const MAX_ARROWS: usize = 10;

/// A finite groupoid. `m(g, h)` is defined when `r(g) = d(h)` and runs from
/// `d(g)` to `r(h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroupoid {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub d: Vec<usize>,
    pub r: Vec<usize>,
    /// `comp[g * |G1| + h] = m(g, h)`
    pub comp: Vec<Option<usize>>,
    pub inv: Vec<usize>,
    /// `unit[x] = u(x)`
    pub unit: Vec<usize>,
}

impl FiniteGroupoid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<String>,
        d: Vec<usize>,
        r: Vec<usize>,
        comp: Vec<Option<usize>>,
        inv: Vec<usize>,
        unit: Vec<usize>,
    ) -> Result<Self> {
        let g = Self {
            name: name.into(),
            objects,
            arrows,
            d,
            r,
            comp,
            inv,
            unit,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGroupoid(msg));
        let (n0, n1) = (self.objects.len(), self.arrows.len());
        if n1 > MAX_ARROWS {
            return bad(format!("{n1} arrows, at most {MAX_ARROWS} supported"));
        }
        if self.d.len() != n1 || self.r.len() != n1 || self.inv.len() != n1 || self.unit.len() != n0 {
            return bad("table sizes do not match".into());
        }
        if self.comp.len() != n1 * n1 {
            return bad("composition table has the wrong size".into());
        }
        if self.d.iter().chain(&self.r).any(|&x| x >= n0) || self.unit.iter().chain(&self.inv).any(|&g| g >= n1) {
            return bad("index out of range".into());
        }
        for x in 0..n0 {
            let u = self.unit[x];
            if self.d[u] != x || self.r[u] != x {
                return bad(format!("u({}) is not a loop at it", self.objects[x]));
            }
        }
        for g in 0..n1 {
            for h in 0..n1 {
                match (self.r[g] == self.d[h], self.m(g, h)) {
                    (true, Some(k)) if k < n1 && self.d[k] == self.d[g] && self.r[k] == self.r[h] => {}
                    (false, None) => {}
                    _ => return bad(format!("m({}, {}) is wrong", self.arrows[g], self.arrows[h])),
                }
            }
            if self.m(self.unit[self.d[g]], g) != Some(g) || self.m(g, self.unit[self.r[g]]) != Some(g) {
                return bad(format!("unit law at {}", self.arrows[g]));
            }
            let i = self.inv[g];
            if self.m(g, i) != Some(self.unit[self.d[g]]) || self.m(i, g) != Some(self.unit[self.r[g]]) {
                return bad(format!("inverse of {}", self.arrows[g]));
            }
        }
        for f in 0..n1 {
            for g in 0..n1 {
                let Some(fg) = self.m(f, g) else { continue };
                for h in 0..n1 {
                    if let Some(gh) = self.m(g, h) {
                        if self.m(fg, h) != self.m(f, gh) {
                            return bad(format!("associativity at {}, {}, {}", f, g, h));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn m(&self, g: usize, h: usize) -> Option<usize> {
        self.comp[g * self.arrows.len() + h]
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// A group of order `n` with multiplication `mul`, as a one-object groupoid.
    pub fn group(
        name: impl Into<String>,
        n: usize,
        identity: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let comp: Vec<Option<usize>> = (0..n * n).map(|k| Some(mul(k / n, k % n))).collect();
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| mul(g, h) == identity).unwrap_or(g))
            .collect();
        Self::new(
            name,
            vec!["*".into()],
            (0..n).map(|g| g.to_string()).collect(),
            vec![0; n],
            vec![0; n],
            comp,
            inv,
            vec![identity],
        )
    }

    pub fn cyclic(n: usize) -> Self {
        Self::group(format!("Z{n}"), n, 0, |a, b| (a + b) % n).expect("Z/n is a group")
    }

    /// One arrow `(a, b)` from `a` to `b` for every pair of points.
    pub fn pair(n: usize) -> Self {
        let k = n * n;
        let comp = (0..k * k)
            .map(|ij| {
                let (g, h) = (ij / k, ij % k);
                (g % n == h / n).then_some((g / n) * n + h % n)
            })
            .collect();
        Self::new(
            format!("pair{n}"),
            (0..n).map(|x| x.to_string()).collect(),
            (0..k).map(|g| format!("({},{})", g / n, g % n)).collect(),
            (0..k).map(|g| g / n).collect(),
            (0..k).map(|g| g % n).collect(),
            comp,
            (0..k).map(|g| (g % n) * n + g / n).collect(),
            (0..n).map(|x| x * n + x).collect(),
        )
        .expect("pair groupoid")
    }

    /// Only unit arrows.
    pub fn discrete(n: usize) -> Self {
        Self::new(
            format!("discrete{n}"),
            (0..n).map(|x| x.to_string()).collect(),
            (0..n).map(|x| format!("1_{x}")).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n * n).map(|ij| (ij / n == ij % n).then_some(ij / n)).collect(),
            (0..n).collect(),
            (0..n).collect(),
        )
        .expect("discrete groupoid")
    }

    pub fn disjoint_union(a: &Self, b: &Self) -> Result<Self> {
        let (a0, a1, b1) = (a.object_count(), a.arrow_count(), b.arrow_count());
        let n1 = a1 + b1;
        let tag = |side: &str, s: &String| format!("{side}.{s}");
        let comp = (0..n1 * n1)
            .map(|ij| {
                let (g, h) = (ij / n1, ij % n1);
                match (g < a1, h < a1) {
                    (true, true) => a.m(g, h),
                    (false, false) => b.m(g - a1, h - a1).map(|k| k + a1),
                    _ => None,
                }
            })
            .collect();
        Self::new(
            format!("{}+{}", a.name, b.name),
            a.objects
                .iter()
                .map(|s| tag("l", s))
                .chain(b.objects.iter().map(|s| tag("r", s)))
                .collect(),
            a.arrows
                .iter()
                .map(|s| tag("l", s))
                .chain(b.arrows.iter().map(|s| tag("r", s)))
                .collect(),
            a.d.iter().copied().chain(b.d.iter().map(|&x| x + a0)).collect(),
            a.r.iter().copied().chain(b.r.iter().map(|&x| x + a0)).collect(),
            comp,
            a.inv.iter().copied().chain(b.inv.iter().map(|&g| g + a1)).collect(),
            a.unit.iter().copied().chain(b.unit.iter().map(|&g| g + a1)).collect(),
        )
    }

    /// Mask of the unit arrows.
    pub fn unit_mask(&self) -> Elem {
        self.unit.iter().fold(0, |m, &u| m | 1 << u)
    }

    /// Arrow sets on which `d` and `r` are both injective.
    pub fn bisections(&self) -> Vec<Elem> {
        let injective = |mask: usize, f: &[usize]| {
            let mut seen = 0u64;
            (0..self.arrow_count()).filter(|g| mask >> g & 1 == 1).all(|g| {
                let fresh = seen >> f[g] & 1 == 0;
                seen |= 1 << f[g];
                fresh
            })
        };
        (0..1usize << self.arrow_count())
            .filter(|&m| injective(m, &self.d) && injective(m, &self.r))
            .collect()
    }

    /// `sup(U) = u(d(U))`
    pub fn support_table(&self) -> Vec<Elem> {
        (0..1usize << self.arrow_count())
            .map(|m| {
                (0..self.arrow_count())
                    .filter(|g| m >> g & 1 == 1)
                    .fold(0, |acc, g| acc | 1 << self.unit[self.d[g]])
            })
            .collect()
    }
}

/// The quantale of all arrow sets with `UV = m(U ×_{G0} V)` and `U* = i(U)`.
/// Checks that it is an inverse quantal frame whose support is `u∘d` and whose
/// partial units are the bisections.
pub fn quantale_of(g: &FiniteGroupoid) -> Result<Quantale> {
    let q = Quantale::from_atoms(
        format!("O({})", g.name),
        g.arrow_count(),
        |a, b| g.m(a, b).map_or(0, |k| 1 << k),
        |a| g.inv[a],
        Some(g.unit_mask()),
        &g.arrows,
    );
    let theorem = |law: &str, witness: Vec<Elem>| Err(Error::Theorem(crate::error::Violation::new(law, witness)));
    if let Some(a) = q.stably_gelfand_witness() {
        return theorem("O(G) is stably Gelfand", vec![a]);
    }
    let report = q.classify();
    if let Some(w) = report.inverse_quantal_frame.witness() {
        return theorem("O(G) is an inverse quantal frame", w.to_vec());
    }
    let table = g.support_table();
    if let Some(u) = (0..q.len()).find(|&u| q.sup(u) != table[u]) {
        return theorem("sup(U) = u(d(U))", vec![u]);
    }
    let units = q.partial_units()?.elements;
    if units != g.bisections() {
        return theorem("partial units are the bisections", vec![units.len()]);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_groupoids_validate() {
        for g in [
            FiniteGroupoid::cyclic(1),
            FiniteGroupoid::cyclic(3),
            FiniteGroupoid::pair(3),
            FiniteGroupoid::discrete(2),
        ] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn broken_inverse_is_rejected() {
        let mut g = FiniteGroupoid::cyclic(3);
        g.inv[1] = 1;
        assert!(matches!(g.validate(), Err(Error::InvalidGroupoid(_))));
    }

    #[test]
    fn group_bisections_are_singletons() {
        let g = FiniteGroupoid::cyclic(3);
        assert_eq!(g.bisections(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn discrete_groupoid_gives_a_frame() {
        let q = quantale_of(&FiniteGroupoid::discrete(2)).unwrap();
        for u in 0..q.len() {
            assert_eq!(q.inv(u), u);
            for v in 0..q.len() {
                assert_eq!(q.mul(u, v), q.meet(u, v));
            }
        }
    }
}
