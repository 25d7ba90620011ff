//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Rel = BTreeSet<(usize, usize)>;

/// Decodes a `relq(n)` element into its set of pairs.
pub fn rel_of(n: usize, mask: usize) -> Rel {
    (0..n * n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i / n, i % n))
        .collect()
}

pub fn mask_of(n: usize, rel: &Rel) -> usize {
    rel.iter().fold(0, |m, &(a, b)| m | 1 << (a * n + b))
}

pub fn compose(r: &Rel, s: &Rel) -> Rel {
    let mut out = Rel::new();
    for &(a, b) in r {
        for &(b2, c) in s {
            if b == b2 {
                out.insert((a, c));
            }
        }
    }
    out
}

pub fn converse(r: &Rel) -> Rel {
    r.iter().map(|&(a, b)| (b, a)).collect()
}

pub fn diagonal(n: usize) -> Rel {
    (0..n).map(|a| (a, a)).collect()
}

/// Partial bijections on an `n`-set, by direct enumeration of relations.
pub fn partial_bijections(n: usize) -> Vec<usize> {
    (0..1usize << (n * n))
        .filter(|&m| {
            let r = rel_of(n, m);
            let dom: BTreeSet<_> = r.iter().map(|p| p.0).collect();
            let cod: BTreeSet<_> = r.iter().map(|p| p.1).collect();
            dom.len() == r.len() && cod.len() == r.len()
        })
        .collect()
}

use std::sync::Arc;

use qlab_core::catalog;
use qlab_core::groupoid::GroupoidAction;
use qlab_core::hilbert::{enumerate_homs, module_from_qset, qset_from_basis, PreHilbertModule, DEFAULT_CARRIER_CAP};
use qlab_core::qmatrix::{completion, unitary_violation, QMatrix, QSet, Strategy};
use qlab_core::{Elem, Quantale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Matrix product by a direct triple loop over the quantale tables.
pub fn matmul(q: &Quantale, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let (n, m, k) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![q.bottom(); k]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][l] = q.join(out[i][l], q.mul(a[i][j], b[j][l]));
            }
        }
    }
    out
}

/// Draws a random self-adjoint matrix and closes it under `A ← A ∨ AA`.
/// Returns `None` when the fixpoint is not idempotent.
pub fn sample_qset(q: &Arc<Quantale>, n: usize, rng: &mut ChaCha8Rng) -> Option<QSet> {
    let size = q.len();
    let mut projections = q.projections();
    if let Some(e) = q.unit() {
        projections.retain(|&p| q.leq(p, e));
    }
    let units = q.partial_units().map(|p| p.elements).unwrap_or_default();
    let draw = |pool: &[Elem], rng: &mut ChaCha8Rng| -> Elem {
        match rng.gen_range(0..10) {
            0..=1 => q.bottom(),
            2..=7 if !pool.is_empty() => pool[rng.gen_range(0..pool.len())],
            _ => rng.gen_range(0..size),
        }
    };
    let mut a = vec![vec![q.bottom(); n]; n];
    for i in 0..n {
        let x = draw(&projections, rng);
        a[i][i] = q.join(x, q.inv(x));
    }
    for i in 0..n {
        for j in i + 1..n {
            let x = draw(&units, rng);
            // sandwiching keeps off-diagonal entries below the diagonal ones
            let x = if rng.gen_bool(0.5) {
                q.mul(q.mul(a[i][i], x), a[j][j])
            } else {
                x
            };
            a[i][j] = x;
            a[j][i] = q.inv(x);
        }
    }
    loop {
        let sq = matmul(q, &a, &a);
        let next: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| q.join(a[i][j], sq[i][j])).collect())
            .collect();
        if next == a {
            break;
        }
        a = next;
    }
    if matmul(q, &a, &a) != a {
        return None;
    }
    QSet::unlabeled(QMatrix::from_rows(q.clone(), &a).ok()?).ok()
}

/// Keeps drawing until `count` Q-sets have been produced.
pub fn sample_qsets(q: &Arc<Quantale>, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<QSet> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 100 * count, "sampler keeps failing over {}", q.name());
        if let Some(x) = sample_qset(q, n, rng) {
            out.push(x);
        }
    }
    out
}

/// The regular module and `Q^I A` for sampled `A` of sizes 1 to 3.
pub fn sampled_modules(name: &str, seed: u64, per_size: usize) -> Vec<(QSet, PreHilbertModule)> {
    let q = Arc::new(catalog::quantale_by_name(name).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![(
        QSet::point(q.clone(), q.unit().unwrap_or(q.top())).unwrap(),
        PreHilbertModule::regular(q.clone()),
    )];
    for n in 1..=3 {
        for a in sample_qsets(&q, n, per_size, &mut rng) {
            let m = module_from_qset(&a, DEFAULT_CARRIER_CAP).unwrap();
            out.push((a, m.module));
        }
    }
    out
}

/// Every hom, by its images on `gens`.
pub fn all_homs(src: &PreHilbertModule, gens: &[Elem], tgt: &PreHilbertModule) -> Vec<Vec<Elem>> {
    let cands = vec![(0..tgt.len()).collect::<Vec<_>>(); gens.len()];
    enumerate_homs(src, gens, tgt.module(), &cands, |_| true).unwrap()
}

/// `Q^I A` rebuilt from all of its sections is the completion of `A`.
pub fn assert_completion_matches(a: &QSet) {
    let q = a.quantale();
    let x = module_from_qset(a, DEFAULT_CARRIER_CAP).unwrap();
    let sections = x.module.hilbert_sections();
    let b = qset_from_basis(&x.module, &sections).unwrap();
    let c = completion(a, Strategy::default()).unwrap();
    assert_eq!(b.len(), c.qset.len());
    // a singleton S corresponds to the section with vector S*
    let perm: Vec<usize> = c
        .singletons
        .iter()
        .map(|s| {
            let star: Vec<Elem> = s.column.iter().map(|&v| q.inv(v)).collect();
            let el = x.element_of(&star).unwrap();
            sections.binary_search(&el).unwrap()
        })
        .collect();
    for i in 0..perm.len() {
        for j in 0..perm.len() {
            assert_eq!(b.get(perm[i], perm[j]), c.qset.get(i, j));
        }
    }
    assert_eq!(
        unitary_violation(&c.relation, a.matrix(), c.qset.matrix()).unwrap(),
        None
    );
    let r = QMatrix::from_fn(q.clone(), b.len(), a.len(), |i, alpha| {
        let k = perm.iter().position(|&p| p == i).unwrap();
        c.relation.get(k, alpha)
    });
    assert_eq!(unitary_violation(&r, a.matrix(), b.matrix()).unwrap(), None);
}

/// All functions over the objects, filtered by equivariance.
pub fn brute_equivariant(a: &GroupoidAction, b: &GroupoidAction) -> Vec<Vec<usize>> {
    let total = b.len().pow(a.len() as u32);
    (0..total)
        .map(|code| {
            (0..a.len())
                .map(|x| code / b.len().pow((a.len() - 1 - x) as u32) % b.len())
                .collect::<Vec<_>>()
        })
        .filter(|f| {
            (0..a.len()).all(|x| b.p[f[x]] == a.p[x])
                && (0..a.groupoid.arrow_count())
                    .all(|h| (0..a.len()).all(|x| a.at(h, x).map(|y| f[y]) == a.at(h, x).and(b.at(h, f[x]))))
        })
        .collect()
}
