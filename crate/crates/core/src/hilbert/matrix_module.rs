use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result, Violation};
use crate::lattice::{Elem, SupLattice};
use crate::qmatrix::{QMatrix, QSet};

use super::hom::{hom_violation, HomTable};
use super::{PreHilbertModule, QModule};

pub const DEFAULT_CARRIER_CAP: usize = 4096;

/// The module `Q^I A = {vA}` of a Q-set, materialized as a finite lattice of
/// vectors with the dot product as inner product.
#[derive(Clone, Debug)]
pub struct MatrixModule {
    pub module: PreHilbertModule,
    /// `vectors[x]` is the vector represented by carrier element `x`.
    pub vectors: Vec<Vec<Elem>>,
    /// `basis[α]` is the carrier element of the row `α̃`.
    pub basis: Vec<Elem>,
    pub qset: QSet,
    index: HashMap<Vec<Elem>, Elem>,
}

impl MatrixModule {
    pub fn element_of(&self, v: &[Elem]) -> Option<Elem> {
        self.index.get(v).copied()
    }
}

/// Builds `Q^I A` as the closure of `{q·α̃} ∪ {0}` under binary joins.
pub fn module_from_qset(a: &QSet, cap: usize) -> Result<MatrixModule> {
    let q = a.quantale().clone();
    let n = a.len();
    let zero = vec![q.bottom(); n];
    let rows: Vec<Vec<Elem>> = (0..n).map(|i| a.matrix().row(i).to_vec()).collect();
    let scale = |c: Elem, v: &[Elem]| -> Vec<Elem> { v.iter().map(|&x| q.mul(c, x)).collect() };
    let join = |v: &[Elem], w: &[Elem]| -> Vec<Elem> { v.iter().zip(w).map(|(&x, &y)| q.join(x, y)).collect() };

    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut elems: Vec<Vec<Elem>> = Vec::new();
    let mut push = |v: Vec<Elem>, elems: &mut Vec<Vec<Elem>>| -> Result<()> {
        if seen.insert(v.clone()) {
            elems.push(v);
            if elems.len() > cap {
                return Err(Error::CarrierTooLarge(cap));
            }
        }
        Ok(())
    };
    push(zero.clone(), &mut elems)?;
    for row in &rows {
        for c in 0..q.len() {
            push(scale(c, row), &mut elems)?;
        }
    }
    let mut i = 0;
    while i < elems.len() {
        for j in 0..i {
            let v = join(&elems[i], &elems[j]);
            push(v, &mut elems)?;
        }
        i += 1;
    }
    elems.sort();
    let index: HashMap<Vec<Elem>, Elem> = elems.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    let m = elems.len();
    let leq = |x: Elem, y: Elem| elems[x].iter().zip(&elems[y]).all(|(&a, &b)| q.leq(a, b));
    let labels = elems
        .iter()
        .map(|v| {
            let parts: Vec<&str> = v.iter().map(|&x| q.label(x)).collect();
            format!("[{}]", parts.join(";"))
        })
        .collect();
    let carrier = SupLattice::from_leq(m, leq)?.with_labels(labels)?;
    let action: Vec<Elem> = (0..q.len() * m).map(|k| index[&scale(k / m, &elems[k % m])]).collect();
    let dot = |v: &[Elem], w: &[Elem]| {
        v.iter()
            .zip(w)
            .fold(q.bottom(), |acc, (&x, &y)| q.join(acc, q.mul(x, q.inv(y))))
    };
    let ip: Vec<Elem> = (0..m * m).map(|k| dot(&elems[k / m], &elems[k % m])).collect();
    let module = PreHilbertModule::new(QModule::new(q.clone(), carrier, action)?, ip)?;
    let basis: Vec<Elem> = rows.iter().map(|r| index[r]).collect();
    // ⟨v, β̃⟩ = v_β and ⟨α̃, β̃⟩ = a_{αβ}
    for (x, v) in elems.iter().enumerate() {
        for (b, &row) in basis.iter().enumerate() {
            if module.ip(x, row) != v[b] {
                return Err(Error::Theorem(Violation::new("⟨v, β̃⟩ = v_β", vec![x, b])));
            }
        }
    }
    for (i, &ri) in basis.iter().enumerate() {
        for (j, &rj) in basis.iter().enumerate() {
            if module.ip(ri, rj) != a.get(i, j) {
                return Err(Error::Theorem(Violation::new("⟨α̃, β̃⟩ = a_αβ", vec![i, j])));
            }
        }
    }
    Ok(MatrixModule {
        module,
        vectors: elems,
        basis,
        qset: a.clone(),
        index,
    })
}

/// The Q-set `(Σ, ⟨s,t⟩)` of a Hilbert basis.
pub fn qset_from_basis(x: &PreHilbertModule, sigma: &[Elem]) -> Result<QSet> {
    if let Some(w) = x.basis_witness(sigma) {
        return Err(Error::NotABasis(w));
    }
    let matrix = QMatrix::from_fn(x.quantale().clone(), sigma.len(), sigma.len(), |i, j| {
        x.ip(sigma[i], sigma[j])
    });
    let index = sigma.iter().map(|&s| x.carrier().label(s).to_string()).collect();
    QSet::new(index, matrix)
}

/// Rebuilds `X` from a basis as `Q^Σ A_Σ` and returns it with the isomorphism
/// `ψ(v) = ⋁_s v_s s`, checked to be a bijective homomorphism preserving inner
/// products.
pub fn representation_iso(x: &PreHilbertModule, sigma: &[Elem], cap: usize) -> Result<(MatrixModule, HomTable)> {
    let a = qset_from_basis(x, sigma)?;
    let m = module_from_qset(&a, cap)?;
    let psi: HomTable = m
        .vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(sigma)
                .fold(x.bottom(), |acc, (&c, &s)| x.join(acc, x.act(c, s)))
        })
        .collect();
    if psi.len() != x.len() {
        return Err(Error::Theorem(Violation::new(
            "ψ is bijective",
            vec![psi.len(), x.len()],
        )));
    }
    let mut hit = vec![false; x.len()];
    for &y in &psi {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::Theorem(Violation::new("ψ is injective", vec![y])));
        }
    }
    if let Some(v) = hom_violation(m.module.module(), x.module(), &psi) {
        return Err(Error::Theorem(v));
    }
    for v in 0..psi.len() {
        for w in 0..psi.len() {
            if x.ip(psi[v], psi[w]) != m.module.ip(v, w) {
                return Err(Error::Theorem(Violation::new("ψ preserves ⟨-,-⟩", vec![v, w])));
            }
        }
    }
    Ok((m, psi))
}
