//! Built-in lattices and quantales.

use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::groupoid::{FiniteGroupoid, GroupoidAction, MAX_ARROWS};
use crate::lattice::SupLattice;
use crate::quantale::Quantale;

/// `0 < e, a < 1` with indices `0, e, a, 1`.
pub fn diamond() -> SupLattice {
    SupLattice::build(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
        .and_then(|l| l.with_labels(labels(&["0", "e", "a", "1"])))
        .expect("diamond is a lattice")
}

/// The five-element lattice with three atoms.
pub fn m3() -> SupLattice {
    SupLattice::build(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        .and_then(|l| l.with_labels(labels(&["0", "p", "q", "r", "1"])))
        .expect("M3 is a lattice")
}

pub fn boolean(k: usize) -> SupLattice {
    SupLattice::powerset(k)
}

pub fn chain(n: usize) -> SupLattice {
    SupLattice::chain(n).expect("chains are lattices")
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Binary relations on `{0, …, n-1}` under relational composition. The
/// element with bitmask `m` contains the pair `(a, b)` iff bit `a*n + b` is set,
/// and the product `UV` is `{(a, c) : (a, b) ∈ U, (b, c) ∈ V}`.
pub fn relq(n: usize) -> Quantale {
    assert!((1..=3).contains(&n), "relq is built for n ≤ 3");
    let k = n * n;
    let atom_labels: Vec<String> = (0..k).map(|i| format!("({},{})", i / n, i % n)).collect();
    let diagonal = (0..n).fold(0usize, |m, a| m | 1 << (a * n + a));
    Quantale::from_atoms(
        format!("relq{n}"),
        k,
        |x, y| {
            let (a, b) = (x / n, x % n);
            let (b2, c) = (y / n, y % n);
            if b == b2 {
                1 << (a * n + c)
            } else {
                0
            }
        },
        |x| (x % n) * n + x / n,
        Some(diagonal),
        &atom_labels,
    )
}

/// The eight-element Boolean algebra with atoms `a, b, c`, trivial involution,
/// unit `a`, and every other nonzero product equal to the top.
/// Indices: `0, a, b, c, x=a∨b, y=a∨c, z=b∨c, 1`.
pub fn egger8() -> Quantale {
    let masks = [0usize, 1, 2, 4, 3, 5, 6, 7];
    let lattice = SupLattice::from_leq(8, |i, j| masks[i] & !masks[j] == 0)
        .and_then(|l| l.with_labels(labels(&["0", "a", "b", "c", "x", "y", "z", "1"])))
        .expect("Boolean algebra");
    let mut mul = vec![0; 64];
    for p in 0..8 {
        for q in 0..8 {
            mul[p * 8 + q] = match (p, q) {
                (0, _) | (_, 0) => 0,
                (1, q) => q,
                (p, 1) => p,
                _ => 7,
            };
        }
    }
    Quantale::new("egger8", lattice, mul, (0..8).collect(), Some(1)).expect("well-formed tables")
}

/// The diamond `{0, e, a, 1}` with unit `e`, `aa = a1 = 1a = 11 = 1` and
/// trivial involution.
pub fn quantale_r4() -> Quantale {
    let mut mul = vec![0; 16];
    for x in 0..4 {
        for y in 0..4 {
            mul[x * 4 + y] = match (x, y) {
                (0, _) | (_, 0) => 0,
                (1, y) => y,
                (x, 1) => x,
                _ => 3,
            };
        }
    }
    Quantale::new("quantale_r4", diamond(), mul, (0..4).collect(), Some(1)).expect("well-formed tables")
}

/// A frame as a quantale: `ab = a∧b`, trivial involution, unit the top.
pub fn frame(lattice: SupLattice, name: &str) -> Result<Quantale> {
    if let Some(w) = lattice.frame_witness() {
        return Err(Error::InvalidQuantale(Violation::new("distributivity", w)));
    }
    let n = lattice.len();
    let mul = (0..n * n).map(|ij| lattice.meet(ij / n, ij % n)).collect();
    let top = lattice.top();
    Quantale::new(name, lattice, mul, (0..n).collect(), Some(top))
}

/// The powerset of the cyclic group `Z/n` with the pointwise group product.
pub fn cyclic_group_quantale(n: usize) -> Quantale {
    assert!((1..=8).contains(&n));
    let atom_labels: Vec<String> = (0..n).map(|g| g.to_string()).collect();
    Quantale::from_atoms(
        format!("z{n}"),
        n,
        |g, h| 1 << ((g + h) % n),
        |g| (n - g) % n,
        Some(1),
        &atom_labels,
    )
}

/// The two-element chain with constant zero product and trivial involution.
pub fn zero2() -> Quantale {
    Quantale::new("zero2", chain(2), vec![0; 4], vec![0, 1], None).expect("well-formed tables")
}

/// Looks up a lattice by catalog name: `diamond`, `m3`, `boolK`, `chainN`.
pub fn lattice_by_name(name: &str) -> Option<SupLattice> {
    match name {
        "diamond" => Some(diamond()),
        "m3" => Some(m3()),
        _ => {
            if let Some(k) = name.strip_prefix("bool").and_then(|k| k.parse().ok()) {
                (k <= 6).then(|| boolean(k))
            } else if let Some(n) = name.strip_prefix("chain").and_then(|n| n.parse().ok()) {
                (1..=64).contains(&n).then(|| chain(n))
            } else {
                None
            }
        }
    }
}

/// Looks up a quantale by catalog name: `relqN`, `egger8`, `quantale_r4`
/// (alias `r4`), `zero2`, `zN` (group quantale of `Z/N`) and `frame_<lattice>`.
pub fn quantale_by_name(name: &str) -> Option<Quantale> {
    match name {
        "egger8" => Some(egger8()),
        "quantale_r4" | "r4" => Some(quantale_r4()),
        "zero2" => Some(zero2()),
        _ => {
            if let Some(n) = name.strip_prefix("relq").and_then(|n| n.parse().ok()) {
                (1..=3).contains(&n).then(|| relq(n))
            } else if let Some(n) = name.strip_prefix('z').and_then(|n| n.parse().ok()) {
                (1..=8).contains(&n).then(|| cyclic_group_quantale(n))
            } else if let Some(l) = name.strip_prefix("frame_") {
                frame(lattice_by_name(l)?, name).ok()
            } else {
                None
            }
        }
    }
}

/// Names accepted by [`quantale_by_name`] that are listed by the CLI.
pub const QUANTALE_NAMES: &[&str] = &[
    "relq1",
    "relq2",
    "relq3",
    "egger8",
    "quantale_r4",
    "zero2",
    "z2",
    "z3",
    "frame_bool2",
    "frame_diamond",
    "frame_chain3",
];

pub const LATTICE_NAMES: &[&str] = &["diamond", "m3", "bool2", "bool3", "chain2", "chain3"];

/// Groupoids by name: `zN`, `pairN`, `discreteN`, and `A+B` for a disjoint union.
pub fn groupoid_by_name(name: &str) -> Option<FiniteGroupoid> {
    if let Some((a, b)) = name.split_once('+') {
        return FiniteGroupoid::disjoint_union(&groupoid_by_name(a)?, &groupoid_by_name(b)?).ok();
    }
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = num("pair") {
        (1..=3).contains(&n).then(|| FiniteGroupoid::pair(n))
    } else if let Some(n) = num("discrete") {
        (1..=MAX_ARROWS).contains(&n).then(|| FiniteGroupoid::discrete(n))
    } else if let Some(n) = num("z") {
        (1..=MAX_ARROWS).contains(&n).then(|| FiniteGroupoid::cyclic(n))
    } else {
        None
    }
}

pub const GROUPOID_NAMES: &[&str] = &["z1", "z2", "z3", "pair2", "pair3", "discrete2", "z2+pair2"];

/// Actions by `GROUPOID/KIND` with kind `regular`, `objects` or `sum`.
pub fn action_by_name(name: &str) -> Option<GroupoidAction> {
    let (g, kind) = name.rsplit_once('/')?;
    let g = Arc::new(groupoid_by_name(g)?);
    match kind {
        "regular" => Some(GroupoidAction::regular(&g)),
        "objects" => Some(GroupoidAction::objects(&g)),
        "sum" => GroupoidAction::disjoint_union(&GroupoidAction::regular(&g), &GroupoidAction::objects(&g)).ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_quantales_validate() {
        for name in QUANTALE_NAMES {
            let q = quantale_by_name(name).unwrap();
            assert_eq!(q.validate(), vec![], "{name}");
        }
    }

    #[test]
    fn relq2_composition_matches_nested_loops() {
        let q = relq(2);
        let pairs =
            |m: usize| -> Vec<(usize, usize)> { (0..4).filter(|i| m >> i & 1 == 1).map(|i| (i / 2, i % 2)).collect() };
        for u in 0..16 {
            for v in 0..16 {
                let mut expect = 0;
                for &(a, b) in &pairs(u) {
                    for &(b2, c) in &pairs(v) {
                        if b == b2 {
                            expect |= 1 << (a * 2 + c);
                        }
                    }
                }
                assert_eq!(q.mul(u, v), expect);
            }
        }
    }

    #[test]
    fn lookup_rejects_unknown_names() {
        assert!(quantale_by_name("relq9").is_none());
        assert!(quantale_by_name("frame_m3").is_none());
        assert!(lattice_by_name("bool9").is_none());
        assert!(groupoid_by_name("pair4").is_none());
        assert!(action_by_name("z2/left").is_none());
    }

    #[test]
    fn egger_labels() {
        let q = egger8();
        assert_eq!(q.label(4), "x");
        assert_eq!(q.lattice().join(1, 2), 4);
        assert_eq!(q.lattice().join(1, 3), 5);
        assert_eq!(q.lattice().join(2, 3), 6);
    }
}
