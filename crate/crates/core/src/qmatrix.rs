//! Quantale-valued matrices, Q-sets, their relations and maps, singletons
//! and completion.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::lattice::Elem;
use crate::quantale::Quantale;
use crate::report::Verdict;

/// Dense `rows × cols` matrix with entries in a quantale.
#[derive(Clone)]
pub struct QMatrix {
    q: Arc<Quantale>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMatrix")
            .field("quantale", &self.q.name())
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

impl PartialEq for QMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && same_quantale(&self.q, &other.q)
    }
}

impl Eq for QMatrix {}

fn same_quantale(a: &Arc<Quantale>, b: &Arc<Quantale>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl QMatrix {
    pub fn new(q: Arc<Quantale>, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::TableShape {
                table: "matrix",
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&x) = data.iter().find(|&&x| x >= q.len()) {
            return Err(Error::OutOfRange {
                index: x,
                size: q.len(),
            });
        }
        Ok(Self { q, rows, cols, data })
    }

    pub fn from_fn(q: Arc<Quantale>, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Elem) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Self::new(q, rows, cols, data).expect("entries in range")
    }

    pub fn from_rows(q: Arc<Quantale>, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::TableShape {
                table: "matrix row",
                expected: cols,
                found: r.len(),
            });
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    pub fn zeros(q: Arc<Quantale>, rows: usize, cols: usize) -> Self {
        let z = q.bottom();
        Self::from_fn(q, rows, cols, |_, _| z)
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.q
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        assert!(x < self.q.len());
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_same(&self, other: &QMatrix) -> Result<()> {
        if !same_quantale(&self.q, &other.q) {
            return Err(Error::QuantaleMismatch);
        }
        Ok(())
    }

    /// `(AB)_{ik} = ⋁_j a_{ij} b_{jk}`
    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(self.shape(), other.shape()));
        }
        let q = &self.q;
        Ok(QMatrix::from_fn(self.q.clone(), self.rows, other.cols, |i, k| {
            (0..self.cols).fold(q.bottom(), |acc, j| q.join(acc, q.mul(self.get(i, j), other.get(j, k))))
        }))
    }

    /// `(A*)_{ij} = a*_{ji}`
    pub fn adjoint(&self) -> QMatrix {
        QMatrix::from_fn(self.q.clone(), self.cols, self.rows, |i, j| self.q.inv(self.get(j, i)))
    }

    pub fn join(&self, other: &QMatrix) -> Result<QMatrix> {
        self.same_shape(other)?;
        Ok(QMatrix::from_fn(self.q.clone(), self.rows, self.cols, |i, j| {
            self.q.join(self.get(i, j), other.get(i, j))
        }))
    }

    fn same_shape(&self, other: &QMatrix) -> Result<()> {
        self.check_same(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(self.shape(), other.shape()));
        }
        Ok(())
    }

    /// First entry `(i, j)` where `self ≤ other` fails.
    pub fn leq_witness(&self, other: &QMatrix) -> Result<Option<(usize, usize)>> {
        self.same_shape(other)?;
        Ok(self.first_entry(|i, j| !self.q.leq(self.get(i, j), other.get(i, j))))
    }

    pub fn leq(&self, other: &QMatrix) -> Result<bool> {
        Ok(self.leq_witness(other)?.is_none())
    }

    /// First entry `(i, j)` where the matrices differ.
    pub fn diff_witness(&self, other: &QMatrix) -> Result<Option<(usize, usize)>> {
        self.same_shape(other)?;
        Ok(self.first_entry(|i, j| self.get(i, j) != other.get(i, j)))
    }

    fn first_entry(&self, bad: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| bad(i, j))
    }
}

fn eq_violation(law: &str, lhs: &QMatrix, rhs: &QMatrix) -> Option<Violation> {
    lhs.diff_witness(rhs)
        .expect("shapes checked by caller")
        .map(|(i, j)| Violation::new(law, vec![i, j]))
}

fn leq_violation(law: &str, lhs: &QMatrix, rhs: &QMatrix) -> Option<Violation> {
    lhs.leq_witness(rhs)
        .expect("shapes checked by caller")
        .map(|(i, j)| Violation::new(law, vec![i, j]))
}

/// Why a square matrix is not a Q-set: `A = A*` and `AA = A` are checked in turn.
pub fn qset_violation(a: &QMatrix) -> Option<Violation> {
    if a.rows != a.cols {
        return Some(Violation::new("square", vec![a.rows, a.cols]));
    }
    eq_violation("self-adjoint A = A*", a, &a.adjoint())
        .or_else(|| eq_violation("idempotent AA = A", &a.mul(a).expect("square"), a))
}

pub fn is_qset(a: &QMatrix) -> Verdict {
    Verdict::from_witness(qset_violation(a).map(|v| v.witness))
}

/// First `(α, β)` with `a_{αα} a_{αβ} ≠ a_{αβ}`.
pub fn is_strict(a: &QMatrix) -> Verdict {
    let q = a.quantale();
    Verdict::from_witness(
        a.first_entry(|i, j| q.mul(a.get(i, i), a.get(i, j)) != a.get(i, j))
            .map(|(i, j)| vec![i, j]),
    )
}

/// A finite index set with a self-adjoint idempotent matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSet {
    index: Vec<String>,
    matrix: QMatrix,
}

impl QSet {
    pub fn new(index: Vec<String>, matrix: QMatrix) -> Result<Self> {
        if index.len() != matrix.rows() {
            return Err(Error::TableShape {
                table: "index",
                expected: matrix.rows(),
                found: index.len(),
            });
        }
        if let Some(v) = qset_violation(&matrix) {
            return Err(Error::NotAQSet(v));
        }
        Ok(Self { index, matrix })
    }

    /// Index labels `0, 1, …`.
    pub fn unlabeled(matrix: QMatrix) -> Result<Self> {
        let index = (0..matrix.rows()).map(|i| i.to_string()).collect();
        Self::new(index, matrix)
    }

    pub fn index(&self) -> &[String] {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.matrix.quantale()
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.matrix.get(i, j)
    }

    pub fn is_strict(&self) -> Verdict {
        is_strict(&self.matrix)
    }

    /// The one-point Q-set `[q]`.
    pub fn point(q: Arc<Quantale>, p: Elem) -> Result<Self> {
        Self::new(vec!["*".into()], QMatrix::new(q, 1, 1, vec![p])?)
    }
}

/// Which conditions a matrix `F: J × I` satisfies as an arrow `(I,A) → (J,B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    /// `BF = F = FA`
    pub relation: Option<Violation>,
    /// `FF* ≤ B` and `A ≤ F*F`
    pub map: Option<Violation>,
    /// `f_{βα} = f_{βα} a_{αα}`
    pub dstrict: Verdict,
    /// `f_{βα} = b_{ββ} f_{βα}`
    pub cstrict: Verdict,
    /// `f ≤ f f* f` entrywise
    pub gelfand: Verdict,
}

impl MapReport {
    pub fn is_map(&self) -> bool {
        self.relation.is_none() && self.map.is_none()
    }
}

fn check_arrow_shape(f: &QMatrix, source: &QSet, target: &QSet) -> Result<()> {
    if f.rows() != target.len() || f.cols() != source.len() {
        return Err(Error::ShapeMismatch(f.shape(), (target.len(), source.len())));
    }
    if !same_quantale(f.quantale(), source.quantale()) || !same_quantale(f.quantale(), target.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    Ok(())
}

pub fn relation_violation(f: &QMatrix, source: &QSet, target: &QSet) -> Result<Option<Violation>> {
    check_arrow_shape(f, source, target)?;
    let bf = target.matrix().mul(f)?;
    let fa = f.mul(source.matrix())?;
    Ok(eq_violation("BF = F", &bf, f).or_else(|| eq_violation("FA = F", &fa, f)))
}

pub fn map_report(f: &QMatrix, source: &QSet, target: &QSet) -> Result<MapReport> {
    let relation = relation_violation(f, source, target)?;
    let fs = f.adjoint();
    let map = leq_violation("FF* ≤ B", &f.mul(&fs)?, target.matrix())
        .or_else(|| leq_violation("A ≤ F*F", source.matrix(), &fs.mul(f).expect("shapes")));
    let q = f.quantale();
    let dstrict = Verdict::from_witness(
        f.first_entry(|b, a| f.get(b, a) != q.mul(f.get(b, a), source.get(a, a)))
            .map(|(b, a)| vec![b, a]),
    );
    let cstrict = Verdict::from_witness(
        f.first_entry(|b, a| f.get(b, a) != q.mul(target.get(b, b), f.get(b, a)))
            .map(|(b, a)| vec![b, a]),
    );
    let gelfand = Verdict::from_witness(
        f.first_entry(|b, a| !q.leq(f.get(b, a), q.regular(f.get(b, a))))
            .map(|(b, a)| vec![b, a]),
    );
    Ok(MapReport {
        relation,
        map,
        dstrict,
        cstrict,
        gelfand,
    })
}

/// The four conditions defining a map of frame-valued sets, checked
/// directly in the lattice (meaningful when the quantale is a frame).
pub fn frame_map_violation(f: &QMatrix, source: &QSet, target: &QSet) -> Result<Option<Violation>> {
    check_arrow_shape(f, source, target)?;
    let q = f.quantale();
    let (nj, ni) = f.shape();
    for b in 0..nj {
        for a in 0..ni {
            if !q.leq(f.get(b, a), q.meet(source.get(a, a), target.get(b, b))) {
                return Ok(Some(Violation::new("f ≤ a∧b", vec![b, a])));
            }
        }
    }
    for b in 0..nj {
        for a in 0..ni {
            for b2 in 0..nj {
                for a2 in 0..ni {
                    let lhs = q.meet(q.meet(f.get(b, a), source.get(a, a2)), target.get(b, b2));
                    if !q.leq(lhs, f.get(b2, a2)) {
                        return Ok(Some(Violation::new("f ∧ a ∧ b ≤ f", vec![b, a, b2, a2])));
                    }
                }
            }
        }
    }
    for a in 0..ni {
        for b in 0..nj {
            for b2 in 0..nj {
                if !q.leq(q.meet(f.get(b, a), f.get(b2, a)), target.get(b, b2)) {
                    return Ok(Some(Violation::new("f ∧ f ≤ b", vec![b, b2, a])));
                }
            }
        }
    }
    for a in 0..ni {
        let cover = (0..nj).fold(q.bottom(), |acc, b| q.join(acc, f.get(b, a)));
        if !q.leq(source.get(a, a), cover) {
            return Ok(Some(Violation::new("a ≤ ⋁ f", vec![a])));
        }
    }
    Ok(None)
}

/// A verified map of Q-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSetMap {
    pub source: QSet,
    pub target: QSet,
    pub matrix: QMatrix,
}

impl QSetMap {
    pub fn new(source: QSet, target: QSet, matrix: QMatrix) -> Result<Self> {
        let report = map_report(&matrix, &source, &target)?;
        if let Some(v) = report.relation {
            return Err(Error::NotARelation(v));
        }
        if let Some(v) = report.map {
            return Err(Error::NotAMap(v));
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(x: &QSet) -> Self {
        Self::new(x.clone(), x.clone(), x.matrix().clone()).expect("A is a map A → A")
    }

    /// `other ∘ self`
    pub fn then(&self, other: &QSetMap) -> Result<QSetMap> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch(self.matrix.shape(), other.matrix.shape()));
        }
        QSetMap::new(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(&self.matrix)?,
        )
    }
}

/// A relation `R` with `RR* = target` and `R*R = source`.
pub fn unitary_violation(r: &QMatrix, source: &QMatrix, target: &QMatrix) -> Result<Option<Violation>> {
    let rs = r.adjoint();
    let rrs = r.mul(&rs)?;
    let rsr = rs.mul(r)?;
    rrs.same_shape(target)?;
    rsr.same_shape(source)?;
    Ok(eq_violation("RR* = target", &rrs, target).or_else(|| eq_violation("R*R = source", &rsr, source)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Singleton {
    pub column: Vec<Elem>,
    /// The witnessing projection: `S*S` when the quantale is stably Gelfand,
    /// otherwise the least projection that works.
    pub q: Elem,
    /// Number of projections witnessing this column.
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Full walk when `|Q|^|I|` is within the cap, otherwise propagation.
    Auto {
        cap: u64,
    },
    Exhaustive,
    Propagate,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Auto { cap: 1 << 20 }
    }
}

/// `S*S = ⋁ s*_γ s_γ`
pub fn column_norm(q: &Quantale, s: &[Elem]) -> Elem {
    s.iter().fold(q.bottom(), |acc, &x| q.join(acc, q.mul(q.inv(x), x)))
}

struct SingletonSearch<'a> {
    q: &'a Quantale,
    a: &'a QSet,
    stably_gelfand: bool,
    projections: Vec<Elem>,
}

impl SingletonSearch<'_> {
    /// Conditions between two assigned entries that every singleton satisfies.
    fn pair_ok(&self, s: &[Elem], i: usize, j: usize) -> bool {
        let q = self.q;
        let (si, sj) = (s[i], s[j]);
        q.leq(q.mul(si, q.inv(sj)), self.a.get(i, j))
            && q.leq(q.mul(sj, q.inv(si)), self.a.get(j, i))
            && q.leq(q.mul(self.a.get(i, j), sj), si)
            && q.leq(q.mul(self.a.get(j, i), si), sj)
    }

    /// Candidates for `s_α` given only the diagonal constraints.
    fn candidates(&self, i: usize) -> Vec<Elem> {
        let q = self.q;
        (0..q.len())
            .filter(|&x| {
                let aii = self.a.get(i, i);
                q.leq(q.mul(x, q.inv(x)), aii) && q.leq(q.mul(aii, x), x)
            })
            .collect()
    }

    /// Full verdict for a complete column.
    fn accept(&self, s: &[Elem]) -> Option<Singleton> {
        let q = self.q;
        let n = s.len();
        for i in 0..n {
            for j in 0..n {
                if !q.leq(q.mul(s[i], q.inv(s[j])), self.a.get(i, j)) {
                    return None;
                }
            }
        }
        if self.stably_gelfand {
            for i in 0..n {
                for j in 0..n {
                    if !q.leq(q.mul(self.a.get(i, j), s[j]), s[i]) {
                        return None;
                    }
                }
            }
            return Some(Singleton {
                column: s.to_vec(),
                q: column_norm(q, s),
                multiplicity: 1,
            });
        }
        for i in 0..n {
            let sum = (0..n).fold(q.bottom(), |acc, g| q.join(acc, q.mul(self.a.get(i, g), s[g])));
            if sum != s[i] {
                return None;
            }
        }
        let norm = column_norm(q, s);
        let witnesses: Vec<Elem> = self
            .projections
            .iter()
            .copied()
            .filter(|&p| q.leq(p, norm) && s.iter().all(|&x| q.mul(x, p) == x))
            .collect();
        witnesses.first().map(|&p| Singleton {
            column: s.to_vec(),
            q: p,
            multiplicity: witnesses.len(),
        })
    }

    fn exhaustive(&self) -> Vec<Singleton> {
        let n = self.a.len();
        let m = self.q.len();
        let mut out = Vec::new();
        let mut s = vec![0; n];
        loop {
            if let Some(x) = self.accept(&s) {
                out.push(x);
            }
            // odometer, last index fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                s[k] += 1;
                if s[k] < m {
                    break;
                }
                s[k] = 0;
            }
        }
    }

    fn propagate(&self) -> Vec<Singleton> {
        let n = self.a.len();
        let cands: Vec<Vec<Elem>> = (0..n).map(|i| self.candidates(i)).collect();
        let mut out = Vec::new();
        let mut s = vec![0; n];
        self.descend(0, &cands, &mut s, &mut out);
        out
    }

    fn descend(&self, k: usize, cands: &[Vec<Elem>], s: &mut Vec<Elem>, out: &mut Vec<Singleton>) {
        if k == s.len() {
            if let Some(x) = self.accept(s) {
                out.push(x);
            }
            return;
        }
        for &x in &cands[k] {
            s[k] = x;
            if (0..k).all(|j| self.pair_ok(s, j, k)) {
                self.descend(k + 1, cands, s, out);
            }
        }
    }
}

/// All singletons of `a` in lexicographic column order.
pub fn singletons(a: &QSet, strategy: Strategy) -> Vec<Singleton> {
    let q = a.quantale();
    let search = SingletonSearch {
        q,
        a,
        stably_gelfand: q.is_stably_gelfand(),
        projections: q.projections(),
    };
    let exhaustive = match strategy {
        Strategy::Exhaustive => true,
        Strategy::Propagate => false,
        Strategy::Auto { cap } => (q.len() as f64).powi(a.len() as i32) <= cap as f64,
    };
    if exhaustive {
        search.exhaustive()
    } else {
        search.propagate()
    }
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub singletons: Vec<Singleton>,
    /// The singletons with `â_{ST} = ⋁ s*_α t_α`.
    pub qset: QSet,
    /// Position of column `α` of the input among the singletons.
    pub column_index: Vec<usize>,
    /// `R_{S,α} = s*_α`, unitary from the input onto the completion.
    pub relation: QMatrix,
    pub is_complete: bool,
}

pub fn completion(a: &QSet, strategy: Strategy) -> Result<Completion> {
    let q = a.quantale().clone();
    let ss = singletons(a, strategy);
    let k = ss.len();
    let matrix = QMatrix::from_fn(q.clone(), k, k, |s, t| {
        let (s, t) = (&ss[s].column, &ss[t].column);
        s.iter()
            .zip(t)
            .fold(q.bottom(), |acc, (&x, &y)| q.join(acc, q.mul(q.inv(x), y)))
    });
    let index = (0..k).map(|i| format!("S{i}")).collect();
    let qset = QSet::new(index, matrix)?;
    let mut column_index = Vec::with_capacity(a.len());
    for j in 0..a.len() {
        let col = a.matrix().column(j);
        match ss.iter().position(|s| s.column == col) {
            Some(p) => column_index.push(p),
            None => return Err(Error::Theorem(Violation::new("columns are singletons", vec![j]))),
        }
    }
    let mut distinct = column_index.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let is_complete = distinct.len() == a.len() && k == a.len();
    let relation = QMatrix::from_fn(q.clone(), k, a.len(), |s, alpha| q.inv(ss[s].column[alpha]));
    if let Some(v) = unitary_violation(&relation, a.matrix(), qset.matrix())? {
        return Err(Error::Theorem(v));
    }
    Ok(Completion {
        singletons: ss,
        qset,
        column_index,
        relation,
        is_complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn one_by_one_product() {
        let q = Arc::new(catalog::quantale_r4());
        for a in 0..4 {
            for b in 0..4 {
                let x = QMatrix::new(q.clone(), 1, 1, vec![a]).unwrap();
                let y = QMatrix::new(q.clone(), 1, 1, vec![b]).unwrap();
                assert_eq!(x.mul(&y).unwrap().get(0, 0), q.mul(a, b));
            }
        }
    }

    #[test]
    fn shape_and_quantale_mismatch() {
        let q = Arc::new(catalog::relq(2));
        let r = Arc::new(catalog::quantale_r4());
        let a = QMatrix::zeros(q.clone(), 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::ShapeMismatch(..))));
        let b = QMatrix::zeros(r, 3, 2);
        assert!(matches!(a.mul(&b), Err(Error::QuantaleMismatch)));
    }

    #[test]
    fn unit_point_is_strict_qset() {
        let q = Arc::new(catalog::relq(2));
        let x = QSet::point(q.clone(), q.unit().unwrap()).unwrap();
        assert!(x.is_strict().holds());
        for p in q.projections() {
            QSet::point(q.clone(), p).unwrap();
        }
    }

    #[test]
    fn identity_is_a_map() {
        let q = Arc::new(catalog::relq(2));
        let x = QSet::point(q.clone(), q.unit().unwrap()).unwrap();
        let id = QSetMap::identity(&x);
        assert!(map_report(&id.matrix, &x, &x).unwrap().is_map());
    }

    #[test]
    fn zero_column_is_a_singleton() {
        let q = Arc::new(catalog::egger8());
        let x = QSet::point(q.clone(), 1).unwrap();
        let ss = singletons(&x, Strategy::default());
        assert_eq!(ss[0].column, vec![0]);
        assert_eq!(ss[0].q, 0);
    }
}
