mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qlab_core::catalog;
use qlab_core::qmatrix::{
    completion, frame_map_violation, is_qset, map_report, singletons, unitary_violation, QMatrix, QSet, QSetMap,
    Strategy,
};
use qlab_core::{Elem, Quantale};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Columns `S` for which some projection `q` makes `S : [q] → (I, A)` a map,
/// read straight off `AS = S = Sq`, `SS* ≤ A`, `q ≤ S*S`.
fn singleton_oracle(q: &Quantale, a: &QSet) -> Vec<Vec<Elem>> {
    let n = a.len();
    let rows = a.matrix().to_rows();
    let projections: Vec<Elem> = (0..q.len()).filter(|&p| q.inv(p) == p && q.mul(p, p) == p).collect();
    let mut out = Vec::new();
    let total = q.len().pow(n as u32);
    for code in 0..total {
        let s: Vec<Elem> = (0..n)
            .map(|i| code / q.len().pow((n - 1 - i) as u32) % q.len())
            .collect();
        let col: Vec<Vec<Elem>> = s.iter().map(|&x| vec![x]).collect();
        if common::matmul(q, &rows, &col) != col {
            continue;
        }
        let ok_outer = (0..n).all(|i| (0..n).all(|j| q.leq(q.mul(s[i], q.inv(s[j])), rows[i][j])));
        if !ok_outer {
            continue;
        }
        let norm = s.iter().fold(q.bottom(), |acc, &x| q.join(acc, q.mul(q.inv(x), x)));
        if projections
            .iter()
            .any(|&p| q.leq(p, norm) && s.iter().all(|&x| q.mul(x, p) == x))
        {
            out.push(s);
        }
    }
    out
}

fn columns(v: &[qlab_core::qmatrix::Singleton]) -> Vec<Vec<Elem>> {
    v.iter().map(|s| s.column.clone()).collect()
}

#[test]
fn unit_point_singletons_over_relq2() {
    let q = Arc::new(catalog::relq(2));
    let e = q.unit().unwrap();
    let x = QSet::point(q.clone(), e).unwrap();
    let brute: Vec<Vec<Elem>> = (0..q.len())
        .filter(|&s| q.leq(q.mul(s, q.inv(s)), e))
        .map(|s| vec![s])
        .collect();
    assert_eq!(brute.len(), 9);
    assert_eq!(columns(&singletons(&x, Strategy::Exhaustive)), brute);
    assert_eq!(columns(&singletons(&x, Strategy::Propagate)), brute);
}

#[test]
fn strictness_on_sampled_relq2_qsets() {
    let q = Arc::new(catalog::relq(2));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=4 {
        for a in common::sample_qsets(&q, n, 30, &mut rng) {
            assert!(is_qset(a.matrix()).holds());
            assert!(a.is_strict().holds(), "{:?}", a.matrix().to_rows());
        }
    }
}

#[test]
fn singleton_strategies_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["relq2", "egger8", "quantale_r4", "z3", "frame_diamond", "zero2"] {
        let q = Arc::new(catalog::quantale_by_name(name).unwrap());
        for n in 1..=3 {
            if q.len().pow(n as u32) > 5000 {
                continue;
            }
            for a in common::sample_qsets(&q, n, 6, &mut rng) {
                let oracle = singleton_oracle(&q, &a);
                let ex = singletons(&a, Strategy::Exhaustive);
                let pr = singletons(&a, Strategy::Propagate);
                assert_eq!(columns(&ex), oracle, "{name} {:?}", a.matrix().to_rows());
                assert_eq!(ex, pr, "{name}");
                for j in 0..n {
                    assert!(oracle.contains(&a.matrix().column(j)));
                }
                assert!(oracle.contains(&vec![q.bottom(); n]));
            }
        }
    }
}

#[test]
fn propagation_handles_relq3() {
    let q = Arc::new(catalog::relq(3));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in common::sample_qsets(&q, 3, 4, &mut rng) {
        let ss = singletons(&a, Strategy::Propagate);
        for s in &ss {
            let col = QMatrix::from_rows(q.clone(), &s.column.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap();
            let point = QSet::point(q.clone(), s.q).unwrap();
            assert!(map_report(&col, &point, &a).unwrap().is_map());
        }
        for j in 0..3 {
            assert!(ss.iter().any(|s| s.column == a.matrix().column(j)));
        }
    }
}

#[test]
fn completion_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["relq2", "z2", "frame_diamond", "quantale_r4"] {
        let q = Arc::new(catalog::quantale_by_name(name).unwrap());
        for a in common::sample_qsets(&q, 2, 8, &mut rng) {
            let c = completion(&a, Strategy::default()).unwrap();
            assert!(is_qset(c.qset.matrix()).holds());
            let cc = completion(&c.qset, Strategy::default()).unwrap();
            assert!(cc.is_complete, "{name}");
            assert_eq!(cc.singletons.len(), c.singletons.len());
            assert_eq!(
                unitary_violation(&cc.relation, c.qset.matrix(), cc.qset.matrix()).unwrap(),
                None
            );
            assert_eq!(
                unitary_violation(&c.relation, a.matrix(), c.qset.matrix()).unwrap(),
                None
            );
        }
    }
}

#[test]
fn maps_compose_and_match_frame_conditions() {
    let q = Arc::new(catalog::frame(catalog::boolean(2), "bool2").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sets = common::sample_qsets(&q, 2, 4, &mut rng);
    let all_matrices = |rows: usize, cols: usize| -> Vec<QMatrix> {
        let k = rows * cols;
        (0..q.len().pow(k as u32))
            .map(|code| {
                let data = (0..k).map(|i| code / q.len().pow(i as u32) % q.len()).collect();
                QMatrix::new(q.clone(), rows, cols, data).unwrap()
            })
            .collect()
    };
    let mut maps: Vec<QSetMap> = Vec::new();
    for x in &sets {
        for y in &sets {
            for f in all_matrices(2, 2) {
                let report = map_report(&f, x, y).unwrap();
                let frame = frame_map_violation(&f, x, y).unwrap();
                assert_eq!(report.is_map(), frame.is_none(), "{:?}", f.to_rows());
                if report.is_map() {
                    assert!(report.gelfand.holds());
                    assert!(report.dstrict.holds() && report.cstrict.holds());
                    maps.push(QSetMap::new(x.clone(), y.clone(), f).unwrap());
                }
            }
        }
    }
    assert!(!maps.is_empty());
    for f in &maps {
        let id = QSetMap::identity(&f.source);
        assert_eq!(id.then(f).unwrap().matrix, f.matrix);
        for g in maps.iter().filter(|g| g.source == f.target) {
            f.then(g).unwrap();
        }
    }
}

#[test]
fn gelfand_maps_over_relq2() {
    let q = Arc::new(catalog::relq(2));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for a in common::sample_qsets(&q, 2, 10, &mut rng) {
        for s in singletons(&a, Strategy::default()) {
            let col = QMatrix::from_rows(q.clone(), &s.column.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap();
            let r = map_report(&col, &QSet::point(q.clone(), s.q).unwrap(), &a).unwrap();
            assert!(r.is_map() && r.gelfand.holds());
            assert_eq!(s.multiplicity, 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_product_is_associative(seed in any::<u64>()) {
        let q = Arc::new(catalog::relq(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let mut m = |r: usize, c: usize| {
            let data = (0..r * c).map(|_| rng.gen_range(0..q.len())).collect();
            QMatrix::new(q.clone(), r, c, data).unwrap()
        };
        let (a, b, c) = (m(2, 3), m(3, 2), m(2, 2));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
        let oracle = common::matmul(&q, &a.to_rows(), &b.to_rows());
        prop_assert_eq!(a.mul(&b).unwrap().to_rows(), oracle);
    }

    #[test]
    fn sampled_qsets_are_strict(seed in any::<u64>(), n in 1usize..4) {
        let q = Arc::new(catalog::relq(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::sample_qset(&q, n, &mut rng).expect("relq closures are idempotent");
        prop_assert!(a.is_strict().holds());
    }
}
