use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::hilbert::{enumerate_homs, HomTable};

use super::{module_from_action, quantale_of, ActionModule, EtaleLocale, FiniteGroupoid, GroupoidAction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub equivariant: usize,
    pub sheaf_homs: usize,
    /// `f ↦ f_!` is injective and lands in the sheaf homomorphisms.
    pub bijection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub groupoid: String,
    pub pairs: Vec<PairReport>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.bijection && p.equivariant == p.sheaf_homs)
    }
}

/// Maps `E₁ → E₂` over the objects commuting with every arrow, in
/// lexicographic order.
pub fn equivariant_maps(a: &GroupoidAction, b: &GroupoidAction) -> Vec<Vec<usize>> {
    let g = &a.groupoid;
    let fibers: Vec<Vec<usize>> = (0..a.len())
        .map(|x| (0..b.len()).filter(|&y| b.p[y] == a.p[x]).collect())
        .collect();
    let mut out = Vec::new();
    let mut f = vec![0; a.len()];
    fn descend(
        k: usize,
        f: &mut Vec<usize>,
        fibers: &[Vec<usize>],
        ok: &dyn Fn(&[usize], usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == f.len() {
            out.push(f.clone());
            return;
        }
        for &y in &fibers[k] {
            f[k] = y;
            if ok(f, k) {
                descend(k + 1, f, fibers, ok, out);
            }
        }
    }
    // every constraint f(h·x) = h·f(x) with both points assigned
    let ok = |f: &[usize], k: usize| {
        (0..g.arrow_count()).all(|h| {
            (0..=k).all(|x| match a.at(h, x) {
                Some(y) if y <= k => b.at(h, f[x]) == Some(f[y]),
                _ => true,
            })
        })
    };
    descend(0, &mut f, &fibers, &ok, &mut out);
    out
}

/// Module homomorphisms preserving supports and local sections, sorted.
pub fn sheaf_homs(x: &ActionModule, lx: &EtaleLocale, y: &ActionModule, ly: &EtaleLocale) -> Result<Vec<HomTable>> {
    let gens: Vec<usize> = (0..x.action.len()).map(|p| 1 << p).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            ly.sections
                .iter()
                .copied()
                .filter(|&t| ly.sup[t] == lx.sup[s])
                .collect()
        })
        .collect();
    let mut homs = enumerate_homs(&x.module, &gens, y.module.module(), &candidates, |phi| {
        phi.iter().enumerate().all(|(v, &w)| ly.sup[w] == lx.sup[v])
            && lx.sections.iter().all(|&s| ly.sections.binary_search(&phi[s]).is_ok())
    })?;
    homs.sort();
    Ok(homs)
}

/// Compares equivariant maps with sheaf homomorphisms for every ordered pair
/// of actions, through the direct image `f_!(S) = f(S)`.
pub fn verify_equivalence(g: &Arc<FiniteGroupoid>, actions: &[GroupoidAction]) -> Result<EquivalenceReport> {
    let q = Arc::new(quantale_of(g)?);
    let mut built = Vec::with_capacity(actions.len());
    for a in actions {
        let m = module_from_action(&q, a)?;
        let l = EtaleLocale::new(m.module.module().clone())?;
        built.push((m, l));
    }
    let mut pairs = Vec::new();
    for (mx, lx) in &built {
        for (my, ly) in &built {
            let maps = equivariant_maps(&mx.action, &my.action);
            let homs = sheaf_homs(mx, lx, my, ly)?;
            let mut images: Vec<HomTable> = maps
                .iter()
                .map(|f| {
                    (0..mx.module.len())
                        .map(|s| {
                            (0..f.len())
                                .filter(|&p| s >> p & 1 == 1)
                                .fold(0, |acc, p| acc | 1 << f[p])
                        })
                        .collect()
                })
                .collect();
            let mut bijection = images.iter().all(|phi| homs.binary_search(phi).is_ok());
            images.sort();
            images.dedup();
            bijection &= images.len() == maps.len() && images.len() == homs.len();
            pairs.push(PairReport {
                source: mx.action.name.clone(),
                target: my.action.name.clone(),
                equivariant: maps.len(),
                sheaf_homs: homs.len(),
                bijection,
            });
        }
    }
    Ok(EquivalenceReport {
        groupoid: g.name.clone(),
        pairs,
    })
}
