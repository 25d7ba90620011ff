use crate::error::{Error, Result, Violation};
use crate::lattice::Elem;
use crate::qmatrix::{relation_violation, QMatrix};

use super::{MatrixModule, PreHilbertModule, QModule};

/// A map between module carriers, `table[x] = φ(x)`.
pub type HomTable = Vec<Elem>;

/// First law a table breaks as a homomorphism of Q-modules.
pub fn hom_violation(src: &QModule, tgt: &QModule, f: &[Elem]) -> Option<Violation> {
    let (nq, nx) = (src.quantale().len(), src.len());
    if f.len() != nx {
        return Some(Violation::new("table size", vec![f.len()]));
    }
    if let Some(x) = (0..nx).find(|&x| f[x] >= tgt.len()) {
        return Some(Violation::new("value in range", vec![x]));
    }
    if f[src.bottom()] != tgt.bottom() {
        return Some(Violation::new("φ(0) = 0", vec![src.bottom()]));
    }
    for x in 0..nx {
        for y in x + 1..nx {
            if f[src.join(x, y)] != tgt.join(f[x], f[y]) {
                return Some(Violation::new("φ(x∨y) = φ(x)∨φ(y)", vec![x, y]));
            }
        }
    }
    for a in 0..nq {
        for x in 0..nx {
            if f[src.act(a, x)] != tgt.act(a, f[x]) {
                return Some(Violation::new("φ(ax) = aφ(x)", vec![a, x]));
            }
        }
    }
    None
}

/// `g ∘ f`
pub fn compose(f: &[Elem], g: &[Elem]) -> HomTable {
    f.iter().map(|&y| g[y]).collect()
}

/// Pointwise order of two maps into `tgt`.
pub fn hom_leq(tgt: &QModule, f: &[Elem], g: &[Elem]) -> bool {
    f.iter().zip(g).all(|(&a, &b)| tgt.leq(a, b))
}

pub fn join_homs(tgt: &QModule, f: &[Elem], g: &[Elem]) -> HomTable {
    f.iter().zip(g).map(|(&a, &b)| tgt.join(a, b)).collect()
}

/// `φ†(y) = ⋁_{t∈Σ} ⟨y, φ(t)⟩ t`, with `⟨φ(x),y⟩ = ⟨x,φ†(y)⟩` checked for all `x, y`.
pub fn adjoint(src: &PreHilbertModule, basis: &[Elem], tgt: &PreHilbertModule, f: &[Elem]) -> Result<HomTable> {
    if let Some(x) = src.basis_witness(basis) {
        return Err(Error::NotABasis(x));
    }
    let dag: HomTable = (0..tgt.len())
        .map(|y| {
            basis
                .iter()
                .fold(src.bottom(), |acc, &t| src.join(acc, src.act(tgt.ip(y, f[t]), t)))
        })
        .collect();
    for x in 0..src.len() {
        for y in 0..tgt.len() {
            if tgt.ip(f[x], y) != src.ip(x, dag[y]) {
                return Err(Error::AdjointIdentityFails(x, y));
            }
        }
    }
    Ok(dag)
}

/// `φφ† ≤ id` and `id ≤ φ†φ`.
pub fn is_direct_image(src: &QModule, tgt: &QModule, f: &[Elem], dag: &[Elem]) -> bool {
    (0..tgt.len()).all(|y| tgt.leq(f[dag[y]], y)) && (0..src.len()).all(|x| src.leq(x, dag[f[x]]))
}

/// `M(φ)_{st} = ⟨s, φ(t)⟩` for `s` in the target basis and `t` in the source basis.
pub fn functor_m(src_basis: &[Elem], tgt: &PreHilbertModule, tgt_basis: &[Elem], f: &[Elem]) -> QMatrix {
    QMatrix::from_fn(tgt.quantale().clone(), tgt_basis.len(), src_basis.len(), |i, j| {
        tgt.ip(tgt_basis[i], f[src_basis[j]])
    })
}

/// The homomorphism `Q^J A → Y` determined by a relation `H` from `(J, A)`
/// to the Q-set of a basis of `Y`: `φ(v) = ⋁_{s,t} v_s h*_{ts} t`.
pub fn hom_from_relation(
    src: &MatrixModule,
    tgt: &PreHilbertModule,
    tgt_basis: &[Elem],
    h: &QMatrix,
) -> Result<HomTable> {
    let q = tgt.quantale().clone();
    let target_qset = super::qset_from_basis(tgt, tgt_basis)?;
    if let Some(v) = relation_violation(h, &src.qset, &target_qset)? {
        return Err(Error::NotARelation(v));
    }
    let phi: HomTable = src
        .vectors
        .iter()
        .map(|v| {
            let mut acc = tgt.bottom();
            for (s, &vs) in v.iter().enumerate() {
                for (ti, &t) in tgt_basis.iter().enumerate() {
                    acc = tgt.join(acc, tgt.act(q.mul(vs, q.inv(h.get(ti, s))), t));
                }
            }
            acc
        })
        .collect();
    if let Some(v) = hom_violation(src.module.module(), tgt.module(), &phi) {
        return Err(Error::Theorem(v));
    }
    for (ti, &t) in tgt_basis.iter().enumerate() {
        for (b, &row) in src.basis.iter().enumerate() {
            if tgt.ip(t, phi[row]) != h.get(ti, b) {
                return Err(Error::Theorem(Violation::new("⟨t, φ(β̃)⟩ = h_tβ", vec![ti, b])));
            }
        }
    }
    Ok(phi)
}

/// All module homomorphisms `src → tgt`, where `gens` is a Hilbert basis of
/// `src` and `candidates[i]` lists the allowed images of `gens[i]`. A table
/// is kept when `accept` returns true.
pub fn enumerate_homs(
    src: &PreHilbertModule,
    gens: &[Elem],
    tgt: &QModule,
    candidates: &[Vec<Elem>],
    mut accept: impl FnMut(&[Elem]) -> bool,
) -> Result<Vec<HomTable>> {
    if let Some(x) = src.basis_witness(gens) {
        return Err(Error::NotABasis(x));
    }
    let q = src.quantale();
    let k = gens.len();
    // Relations a·g_j = g_k and a·g_j ≤ g_k among the generators.
    let mut eq_rel: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); k];
    let mut le_rel: Vec<Vec<(usize, Elem, bool)>> = vec![Vec::new(); k];
    for kk in 0..k {
        for j in 0..kk {
            for a in 0..q.len() {
                let (gj, gk) = (gens[j], gens[kk]);
                if src.act(a, gj) == gk {
                    eq_rel[kk].push((j, a));
                } else if src.leq(src.act(a, gj), gk) {
                    le_rel[kk].push((j, a, true));
                }
                if src.leq(src.act(a, gk), gj) {
                    le_rel[kk].push((j, a, false));
                }
            }
        }
    }
    let coeffs: Vec<Vec<Elem>> = (0..src.len())
        .map(|x| gens.iter().map(|&s| src.ip(x, s)).collect())
        .collect();
    let mut out = Vec::new();
    let mut assign = vec![0; k];
    let ctx = Enum {
        src,
        tgt,
        gens,
        candidates,
        eq_rel: &eq_rel,
        le_rel: &le_rel,
        coeffs: &coeffs,
    };
    ctx.descend(0, &mut assign, &mut out, &mut accept);
    Ok(out)
}

struct Enum<'a> {
    src: &'a PreHilbertModule,
    tgt: &'a QModule,
    gens: &'a [Elem],
    candidates: &'a [Vec<Elem>],
    eq_rel: &'a [Vec<(usize, Elem)>],
    le_rel: &'a [Vec<(usize, Elem, bool)>],
    coeffs: &'a [Vec<Elem>],
}

impl Enum<'_> {
    fn descend(
        &self,
        k: usize,
        assign: &mut Vec<Elem>,
        out: &mut Vec<HomTable>,
        accept: &mut impl FnMut(&[Elem]) -> bool,
    ) {
        let tgt = self.tgt;
        if k == self.gens.len() {
            let table: HomTable = self
                .coeffs
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(assign.iter())
                        .fold(tgt.bottom(), |acc, (&a, &y)| tgt.join(acc, tgt.act(a, y)))
                })
                .collect();
            let consistent = self.gens.iter().zip(assign.iter()).all(|(&g, &y)| table[g] == y);
            if consistent && hom_violation(self.src.module(), tgt, &table).is_none() && accept(&table) {
                out.push(table);
            }
            return;
        }
        for &y in &self.candidates[k] {
            let ok = self.eq_rel[k].iter().all(|&(j, a)| tgt.act(a, assign[j]) == y)
                && self.le_rel[k].iter().all(|&(j, a, fwd)| {
                    if fwd {
                        tgt.leq(tgt.act(a, assign[j]), y)
                    } else {
                        tgt.leq(tgt.act(a, y), assign[j])
                    }
                });
            if ok {
                assign[k] = y;
                self.descend(k + 1, assign, out, accept);
            }
        }
    }
}
