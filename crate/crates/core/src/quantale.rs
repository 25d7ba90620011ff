//! Finite involutive quantales: tables, law validation and classification.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::lattice::{Elem, SupLattice};
use crate::report::Verdict;

#[derive(Clone, Debug)]
pub struct Quantale {
    name: String,
    lattice: SupLattice,
    mul: Vec<u32>,
    inv: Vec<u32>,
    unit: Option<Elem>,
    report: OnceLock<PropertyReport>,
    support: OnceLock<Option<SupportReport>>,
}

impl PartialEq for Quantale {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.mul == other.mul && self.inv == other.inv && self.unit == other.unit
    }
}

impl Eq for Quantale {}

impl Quantale {
    /// Wraps the tables after checking shapes and index ranges. The algebraic
    /// laws are not checked here; see [`Quantale::validate`] and [`Quantale::checked`].
    pub fn new(
        name: impl Into<String>,
        lattice: SupLattice,
        mul: Vec<Elem>,
        inv: Vec<Elem>,
        unit: Option<Elem>,
    ) -> Result<Self> {
        let n = lattice.len();
        if mul.len() != n * n {
            return Err(Error::TableShape {
                table: "mul",
                expected: n * n,
                found: mul.len(),
            });
        }
        if inv.len() != n {
            return Err(Error::TableShape {
                table: "inv",
                expected: n,
                found: inv.len(),
            });
        }
        for &x in mul.iter().chain(inv.iter()).chain(unit.iter()) {
            if x >= n {
                return Err(Error::OutOfRange { index: x, size: n });
            }
        }
        Ok(Self {
            name: name.into(),
            lattice,
            mul: mul.into_iter().map(|x| x as u32).collect(),
            inv: inv.into_iter().map(|x| x as u32).collect(),
            unit,
            report: OnceLock::new(),
            support: OnceLock::new(),
        })
    }

    /// Like [`Quantale::new`] but rejects tables that break any quantale law.
    pub fn checked(
        name: impl Into<String>,
        lattice: SupLattice,
        mul: Vec<Elem>,
        inv: Vec<Elem>,
        unit: Option<Elem>,
    ) -> Result<Self> {
        let q = Self::new(name, lattice, mul, inv, unit)?;
        match q.validate().into_iter().next() {
            None => Ok(q),
            Some(v) => Err(Error::InvalidQuantale(v)),
        }
    }

    /// The quantale of all subsets of a `k`-element set of atoms, with the
    /// product of two atoms given as a bitmask and the involution as a
    /// permutation of atoms.
    pub fn from_atoms(
        name: impl Into<String>,
        k: usize,
        atom_mul: impl Fn(usize, usize) -> u64,
        atom_inv: impl Fn(usize) -> usize,
        unit: Option<Elem>,
        atom_labels: &[String],
    ) -> Self {
        let lattice = SupLattice::powerset(k);
        let n = 1usize << k;
        let atom_table: Vec<u64> = (0..k * k).map(|ij| atom_mul(ij / k, ij % k)).collect();
        // row[i][v] = atom i times the subset v
        let mut rows = vec![0u32; k * n];
        for i in 0..k {
            for v in 1..n {
                let low = v.trailing_zeros() as usize;
                rows[i * n + v] = rows[i * n + (v & (v - 1))] | atom_table[i * k + low] as u32;
            }
        }
        let mut mul = vec![0u32; n * n];
        for u in 1..n {
            let low = u.trailing_zeros() as usize;
            let rest = u & (u - 1);
            for v in 0..n {
                mul[u * n + v] = mul[rest * n + v] | rows[low * n + v];
            }
        }
        let inv = (0..n)
            .map(|u| {
                (0..k)
                    .filter(|&i| u >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << atom_inv(i))
            })
            .collect();
        let labels = (0..n)
            .map(|m| {
                let items: Vec<&str> = (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| atom_labels[i].as_str())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        Self {
            name: name.into(),
            lattice: lattice.with_labels(labels).expect("label count matches"),
            mul,
            inv,
            unit,
            report: OnceLock::new(),
            support: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn lattice(&self) -> &SupLattice {
        &self.lattice
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.len() + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.join(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.meet(a, b)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice.leq(a, b)
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.lattice.bottom()
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.lattice.top()
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    pub fn require_unit(&self) -> Result<Elem> {
        self.unit.ok_or(Error::NotUnital)
    }

    pub fn label(&self, x: Elem) -> &str {
        self.lattice.label(x)
    }

    pub fn mul_table(&self) -> Vec<Vec<Elem>> {
        let n = self.len();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn inv_table(&self) -> Vec<Elem> {
        (0..self.len()).map(|a| self.inv(a)).collect()
    }

    #[inline]
    fn mul_row(&self, a: Elem) -> &[u32] {
        let n = self.len();
        &self.mul[a * n..(a + 1) * n]
    }

    /// `a a* a`
    #[inline]
    pub fn regular(&self, a: Elem) -> Elem {
        self.mul(self.mul(a, self.inv(a)), a)
    }

    /// Checks every quantale law and returns, for each broken law, its first
    /// violating tuple in lexicographic order.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let l = &self.lattice;
        let mut out = Vec::new();
        let mut push = |law: &str, w: Option<Vec<Elem>>| {
            if let Some(w) = w {
                out.push(Violation::new(law, w));
            }
        };

        push(
            "associativity (ab)c = a(bc)",
            first3(n, |a, b| {
                let ab = self.mul_row(self.mul(a, b));
                let row_a = self.mul_row(a);
                let row_b = self.mul_row(b);
                (0..n).find(|&c| ab[c] != row_a[row_b[c] as usize])
            }),
        );
        push(
            "left distributivity a(b∨c) = ab∨ac",
            first3(n, |a, b| {
                let row_a = self.mul_row(a);
                let ab = row_a[b] as usize;
                let join_b = l.join_row(b);
                (0..n).find(|&c| row_a[join_b[c] as usize] as usize != l.join(ab, row_a[c] as usize))
            }),
        );
        push(
            "right distributivity (a∨b)c = ac∨bc",
            first3(n, |a, b| {
                let ab = l.join(a, b);
                (0..n).find(|&c| self.mul(ab, c) != l.join(self.mul(a, c), self.mul(b, c)))
            }),
        );
        let z = self.bottom();
        push(
            "left zero a0 = 0",
            (0..n).find(|&a| self.mul(a, z) != z).map(|a| vec![a]),
        );
        push(
            "right zero 0a = 0",
            (0..n).find(|&a| self.mul(z, a) != z).map(|a| vec![a]),
        );
        push(
            "involution a** = a",
            (0..n).find(|&a| self.inv(self.inv(a)) != a).map(|a| vec![a]),
        );
        push(
            "involution (ab)* = b*a*",
            first2(n, |a, b| self.inv(self.mul(a, b)) != self.mul(self.inv(b), self.inv(a))),
        );
        push(
            "involution (a∨b)* = a*∨b*",
            first2(n, |a, b| self.inv(l.join(a, b)) != l.join(self.inv(a), self.inv(b))),
        );
        if let Some(e) = self.unit {
            push(
                "left unit ea = a",
                (0..n).find(|&a| self.mul(e, a) != a).map(|a| vec![a]),
            );
            push(
                "right unit ae = a",
                (0..n).find(|&a| self.mul(a, e) != a).map(|a| vec![a]),
            );
            push("unit e* = e", (self.inv(e) != e).then(|| vec![e]));
        }
        out
    }

    /// An element acting as a two-sided identity, if one exists.
    pub fn detect_unit(&self) -> Option<Elem> {
        let n = self.len();
        (0..n).find(|&e| (0..n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// `{p : p* = p, pp = p}`
    pub fn projections(&self) -> Vec<Elem> {
        (0..self.len())
            .filter(|&p| self.inv(p) == p && self.mul(p, p) == p)
            .collect()
    }

    /// `I(Q) = {s : ss* ∨ s*s ≤ e}`
    pub fn partial_units(&self) -> Result<PartialUnits> {
        let e = self.require_unit()?;
        let elements: Vec<Elem> = (0..self.len())
            .filter(|&s| {
                let si = self.inv(s);
                self.leq(self.join(self.mul(s, si), self.mul(si, s)), e)
            })
            .collect();
        let join = self.lattice.join_all(elements.iter().copied());
        Ok(PartialUnits {
            cover: join == self.top(),
            elements,
            join,
        })
    }

    /// `aa*a ≤ a ⇒ aa*a = a`, first failing `a`.
    pub fn stably_gelfand_witness(&self) -> Option<Elem> {
        (0..self.len()).find(|&a| {
            let r = self.regular(a);
            r != a && self.leq(r, a)
        })
    }

    pub fn is_stably_gelfand(&self) -> bool {
        self.stably_gelfand_witness().is_none()
    }

    /// First `(a, b, c)` with `ab ∧ c ≰ a(b ∧ a*c)`.
    pub fn modular_witness(&self) -> Option<[Elem; 3]> {
        let n = self.len();
        let l = &self.lattice;
        for a in 0..n {
            let row_a = self.mul_row(a);
            let row_ai = self.mul_row(self.inv(a));
            for b in 0..n {
                let meet_ab = l.meet_row(row_a[b] as usize);
                let meet_b = l.meet_row(b);
                for c in 0..n {
                    let lhs = meet_ab[c] as usize;
                    if lhs == self.bottom() {
                        continue;
                    }
                    let rhs = row_a[meet_b[row_ai[c] as usize] as usize] as usize;
                    if !l.leq(lhs, rhs) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// The canonical support candidate `a ↦ a1 ∧ e` and its law report.
    /// `None` on non-unital quantales.
    pub fn support(&self) -> Option<&SupportReport> {
        self.support
            .get_or_init(|| self.unit.map(|e| SupportReport::compute(self, e)))
            .as_ref()
    }

    pub fn support_table(&self) -> Result<&[Elem]> {
        self.support().map(|s| s.table.as_slice()).ok_or(Error::NotUnital)
    }

    /// `sup(a)` for a unital quantale.
    pub fn sup(&self, a: Elem) -> Elem {
        self.support().expect("support of a non-unital quantale").table[a]
    }

    pub fn is_stably_supported(&self) -> bool {
        self.support().is_some_and(|s| s.stably_supported().holds())
    }

    /// The base locale `↓e`, with the locale laws `b∧c = bc` and `b* = b` checked.
    pub fn base_locale(&self) -> Result<BaseLocale> {
        let e = self.require_unit()?;
        let support = self.support().expect("unital");
        if let Verdict::Fails { witness } = support.stably_supported() {
            return Err(Error::NotStablySupported(Violation::new("stable support", witness)));
        }
        let elements = self.lattice.down_set(e);
        for &b in &elements {
            if self.inv(b) != b {
                return Err(Error::BNotLocale(b, b));
            }
            for &c in &elements {
                if self.meet(b, c) != self.mul(b, c) {
                    return Err(Error::BNotLocale(b, c));
                }
            }
        }
        let lattice = SupLattice::from_leq(elements.len(), |i, j| self.leq(elements[i], elements[j]))?
            .with_labels(elements.iter().map(|&b| self.label(b).to_string()).collect())?;
        Ok(BaseLocale { elements, lattice })
    }

    /// All flags of the classification ladder, computed once and cached.
    pub fn classify(&self) -> &PropertyReport {
        self.report.get_or_init(|| PropertyReport::compute(self))
    }
}

fn first2(n: usize, bad: impl Fn(Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for a in 0..n {
        for b in 0..n {
            if bad(a, b) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

fn first3(n: usize, bad_c: impl Fn(Elem, Elem) -> Option<Elem>) -> Option<Vec<Elem>> {
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = bad_c(a, b) {
                return Some(vec![a, b, c]);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialUnits {
    pub elements: Vec<Elem>,
    pub join: Elem,
    pub cover: bool,
}

#[derive(Clone, Debug)]
pub struct BaseLocale {
    /// The elements of `↓e` in increasing index order.
    pub elements: Vec<Elem>,
    /// The induced order on `elements`, indexed by position.
    pub lattice: SupLattice,
}

/// The candidate `sup(a) = a1 ∧ e` with every support law evaluated on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub table: Vec<Elem>,
    /// `sup(a) ≤ aa*`
    pub spp2: Verdict,
    /// `a ≤ sup(a)a`
    pub spp3: Verdict,
    /// `sup(a∨b) = sup(a)∨sup(b)`, `sup(0) = 0`
    pub join_preserving: Verdict,
    /// `sup(ab) = sup(a sup(b))`
    pub stable: Verdict,
    /// `sup(a1) ≤ sup(a)`
    pub spp8: Verdict,
    /// `sup(ba) = b sup(a)` for `b ≤ e`
    pub b_equivariant: Verdict,
    /// `sup(a) = aa* ∧ e`, evaluated only when the support is stable.
    pub aa_star_formula: Verdict,
    /// `a1 = sup(a)1`, evaluated only when the candidate is a support.
    pub spp5: Verdict,
}

impl SupportReport {
    fn compute(q: &Quantale, e: Elem) -> Self {
        let n = q.len();
        let one = q.top();
        let table: Vec<Elem> = (0..n).map(|a| q.meet(q.mul(a, one), e)).collect();
        let sup = |a: Elem| table[a];
        let spp2 = Verdict::from_witness((0..n).find(|&a| !q.leq(sup(a), q.mul(a, q.inv(a)))).map(|a| vec![a]));
        let spp3 = Verdict::from_witness((0..n).find(|&a| !q.leq(a, q.mul(sup(a), a))).map(|a| vec![a]));
        let join_preserving = if sup(q.bottom()) != q.bottom() {
            Verdict::fails(vec![q.bottom()])
        } else {
            Verdict::from_witness(first2(n, |a, b| sup(q.join(a, b)) != q.join(sup(a), sup(b))))
        };
        let stable = Verdict::from_witness(first2(n, |a, b| sup(q.mul(a, b)) != sup(q.mul(a, sup(b)))));
        let spp8 = Verdict::from_witness((0..n).find(|&a| !q.leq(sup(q.mul(a, one)), sup(a))).map(|a| vec![a]));
        let base = q.lattice.down_set(e);
        let mut b_equivariant = Verdict::Holds;
        'outer: for &b in &base {
            for a in 0..n {
                if sup(q.mul(b, a)) != q.mul(b, sup(a)) {
                    b_equivariant = Verdict::fails(vec![b, a]);
                    break 'outer;
                }
            }
        }
        let is_support = spp2.holds() && spp3.holds() && join_preserving.holds();
        let aa_star_formula = if is_support && stable.holds() {
            Verdict::from_witness(
                (0..n)
                    .find(|&a| sup(a) != q.meet(q.mul(a, q.inv(a)), e))
                    .map(|a| vec![a]),
            )
        } else {
            Verdict::NotApplicable
        };
        let spp5 = if is_support {
            Verdict::from_witness((0..n).find(|&a| q.mul(a, one) != q.mul(sup(a), one)).map(|a| vec![a]))
        } else {
            Verdict::NotApplicable
        };
        Self {
            table,
            spp2,
            spp3,
            join_preserving,
            stable,
            spp8,
            b_equivariant,
            aa_star_formula,
            spp5,
        }
    }

    pub fn supported(&self) -> Verdict {
        self.spp2
            .clone()
            .and(|| self.spp3.clone())
            .and(|| self.join_preserving.clone())
    }

    pub fn stably_supported(&self) -> Verdict {
        self.supported().and(|| self.stable.clone())
    }

    /// Whether the facts that hold for every support were all observed:
    /// stability, `sup(a1) ≤ sup(a)` and B-equivariance agree, and the
    /// alternative formulas match.
    pub fn consistent(&self) -> bool {
        if !self.supported().holds() {
            return true;
        }
        let stable = self.stable.holds();
        stable == self.spp8.holds()
            && stable == self.b_equivariant.holds()
            && self.spp5.holds()
            && (!stable || self.aa_star_formula.holds())
    }
}

/// Names of the classification flags, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Unital,
    Gelfand,
    LocallyGelfand,
    StablyGelfand,
    Modular,
    Supported,
    StablySupported,
    QuantalFrame,
    StableQuantalFrame,
    InverseQuantalFrame,
}

impl Flag {
    pub const ALL: [Flag; 10] = [
        Flag::Unital,
        Flag::Gelfand,
        Flag::LocallyGelfand,
        Flag::StablyGelfand,
        Flag::Modular,
        Flag::Supported,
        Flag::StablySupported,
        Flag::QuantalFrame,
        Flag::StableQuantalFrame,
        Flag::InverseQuantalFrame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Unital => "unital",
            Flag::Gelfand => "gelfand",
            Flag::LocallyGelfand => "locally_gelfand",
            Flag::StablyGelfand => "stably_gelfand",
            Flag::Modular => "modular",
            Flag::Supported => "supported",
            Flag::StablySupported => "stably_supported",
            Flag::QuantalFrame => "quantal_frame",
            Flag::StableQuantalFrame => "stable_quantal_frame",
            Flag::InverseQuantalFrame => "inverse_quantal_frame",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Flag::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub unital: Verdict,
    pub gelfand: Verdict,
    pub locally_gelfand: Verdict,
    pub stably_gelfand: Verdict,
    pub modular: Verdict,
    pub supported: Verdict,
    pub stably_supported: Verdict,
    pub quantal_frame: Verdict,
    pub stable_quantal_frame: Verdict,
    pub inverse_quantal_frame: Verdict,
}

impl PropertyReport {
    fn compute(q: &Quantale) -> Self {
        let n = q.len();
        let one = q.top();
        let unital = match q.unit {
            Some(_) => Verdict::Holds,
            None => Verdict::fails(vec![]),
        };
        let gelfand = Verdict::from_witness(
            (0..n)
                .find(|&a| q.leq(q.mul(a, one), a) && q.regular(a) != a)
                .map(|a| vec![a]),
        );
        let projections = q.projections();
        let mut locally_gelfand = Verdict::Holds;
        'outer: for a in 0..n {
            if q.regular(a) == a {
                continue;
            }
            for &p in &projections {
                if q.leq(a, p) && q.leq(q.mul(a, p), a) {
                    locally_gelfand = Verdict::fails(vec![a, p]);
                    break 'outer;
                }
            }
        }
        let stably_gelfand = Verdict::from_witness(q.stably_gelfand_witness().map(|a| vec![a]));
        let modular = Verdict::from_witness(q.modular_witness());
        let frame = Verdict::from_witness(q.lattice.frame_witness());
        let (supported, stably_supported, stable_quantal_frame, inverse_quantal_frame) = match q.support() {
            None => (
                Verdict::NotApplicable,
                Verdict::NotApplicable,
                Verdict::NotApplicable,
                Verdict::NotApplicable,
            ),
            Some(s) => {
                let ss = s.stably_supported();
                let sqf = ss.clone().and(|| frame.clone());
                let pu = q.partial_units().expect("unital");
                let iqf = sqf.clone().and(|| {
                    if pu.cover {
                        Verdict::Holds
                    } else {
                        Verdict::fails(vec![pu.join])
                    }
                });
                (s.supported(), ss, sqf, iqf)
            }
        };
        Self {
            unital,
            gelfand,
            locally_gelfand,
            stably_gelfand,
            modular,
            supported,
            stably_supported,
            quantal_frame: frame,
            stable_quantal_frame,
            inverse_quantal_frame,
        }
    }

    pub fn get(&self, flag: Flag) -> &Verdict {
        match flag {
            Flag::Unital => &self.unital,
            Flag::Gelfand => &self.gelfand,
            Flag::LocallyGelfand => &self.locally_gelfand,
            Flag::StablyGelfand => &self.stably_gelfand,
            Flag::Modular => &self.modular,
            Flag::Supported => &self.supported,
            Flag::StablySupported => &self.stably_supported,
            Flag::QuantalFrame => &self.quantal_frame,
            Flag::StableQuantalFrame => &self.stable_quantal_frame,
            Flag::InverseQuantalFrame => &self.inverse_quantal_frame,
        }
    }

    pub fn flags(&self) -> impl Iterator<Item = (Flag, &Verdict)> {
        Flag::ALL.into_iter().map(move |f| (f, self.get(f)))
    }

    /// True when every applicable flag holds.
    pub fn all_hold(&self) -> bool {
        self.flags().all(|(_, v)| !v.is_fail())
    }

    /// First implication of the ladder contradicted by this report, if any.
    pub fn ladder_violation(&self) -> Option<(Flag, Flag)> {
        let mut chain = vec![
            (Flag::InverseQuantalFrame, Flag::StableQuantalFrame),
            (Flag::StableQuantalFrame, Flag::StablySupported),
            (Flag::StablySupported, Flag::Supported),
            (Flag::Modular, Flag::StablySupported),
        ];
        if self.unital.holds() {
            chain.push((Flag::StablyGelfand, Flag::LocallyGelfand));
            chain.push((Flag::LocallyGelfand, Flag::Gelfand));
        } else {
            chain.retain(|&(a, _)| a != Flag::Modular);
        }
        chain
            .into_iter()
            .find(|&(a, b)| self.get(a).holds() && !self.get(b).holds())
    }
}

/// A requirement on one flag, e.g. `stably_supported` or `!modular`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub flag: Flag,
    pub expect: bool,
}

impl Requirement {
    pub fn is_met(&self, report: &PropertyReport) -> bool {
        report.get(self.flag).holds() == self.expect
    }
}

impl FromStr for Requirement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('!') {
            Some(rest) => Ok(Requirement {
                flag: rest.trim().parse()?,
                expect: false,
            }),
            None => Ok(Requirement {
                flag: s.parse()?,
                expect: true,
            }),
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.expect {
            f.write_str("!")?;
        }
        f.write_str(self.flag.name())
    }
}

/// Parses a comma separated conjunction such as `stably_supported,!modular`.
pub fn parse_requirements(s: &str) -> Result<Vec<Requirement>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zero_chain_is_not_stably_gelfand() {
        let q = catalog::zero2();
        assert!(q.validate().is_empty());
        assert_eq!(q.classify().stably_gelfand, Verdict::fails(vec![1]));
        assert_eq!(q.classify().supported, Verdict::NotApplicable);
    }

    #[test]
    fn unit_is_a_projection() {
        for q in [catalog::quantale_r4(), catalog::egger8(), catalog::relq(2)] {
            let e = q.unit().unwrap();
            assert!(q.projections().contains(&e));
        }
    }

    #[test]
    fn r4_projections_and_partial_units() {
        let q = catalog::quantale_r4();
        assert_eq!(q.projections(), vec![0, 1, 3]);
        let pu = q.partial_units().unwrap();
        assert_eq!(pu.elements, vec![0, 1]);
        assert_eq!(pu.join, 1);
        assert!(!pu.cover);
    }

    #[test]
    fn requirement_parsing() {
        let r = parse_requirements("stably_supported, !modular").unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].expect && !r[1].expect);
        assert_eq!(r[1].to_string(), "!modular");
        assert!(parse_requirements("shiny").is_err());
    }

    #[test]
    fn frame_support_is_identity() {
        let q = catalog::frame(SupLattice::powerset(2), "p2").unwrap();
        assert_eq!(q.support_table().unwrap(), &[0, 1, 2, 3]);
    }

    #[test]
    fn non_unital_partial_units_error() {
        assert!(matches!(catalog::zero2().partial_units(), Err(Error::NotUnital)));
    }
}
