mod common;

use std::sync::Arc;
use std::time::Instant;

use qlab_core::catalog;
use qlab_core::groupoid::{
    catalog_actions, equivariant_maps, module_from_action, quantale_of, sheafify, sheafify_action, verify_equivalence,
    EtaleLocale, FiniteGroupoid, GroupoidAction,
};
use qlab_core::hilbert::DEFAULT_CARRIER_CAP;

fn fixtures() -> Vec<Arc<FiniteGroupoid>> {
    vec![
        Arc::new(FiniteGroupoid::cyclic(2)),
        Arc::new(FiniteGroupoid::cyclic(3)),
        Arc::new(FiniteGroupoid::pair(2)),
        Arc::new(FiniteGroupoid::pair(3)),
        Arc::new(FiniteGroupoid::disjoint_union(&FiniteGroupoid::cyclic(2), &FiniteGroupoid::pair(2)).unwrap()),
    ]
}

#[test]
fn pair_groupoid_gives_relations() {
    for n in 2..=3 {
        let q = quantale_of(&FiniteGroupoid::pair(n)).unwrap();
        let r = catalog::relq(n);
        assert_eq!(q.mul_table(), r.mul_table());
        assert_eq!(q.inv_table(), r.inv_table());
        assert_eq!(q.unit(), r.unit());
    }
}

#[test]
fn bisections_of_pair2_are_partial_bijections() {
    let g = FiniteGroupoid::pair(2);
    let mut expected = common::partial_bijections(2);
    expected.sort_unstable();
    assert_eq!(g.bisections(), expected);
    assert_eq!(expected.len(), 7);
}

#[test]
fn group_quantale_of_z2() {
    let g = FiniteGroupoid::cyclic(2);
    let q = quantale_of(&g).unwrap();
    assert_eq!(q.len(), 4);
    assert_eq!(q.partial_units().unwrap().elements, vec![0, 1, 2]);
    assert!(q.partial_units().unwrap().cover);
    assert_eq!(q.sup(0), 0);
    assert_eq!(q.mul(2, 2), 1);
}

#[test]
fn every_fixture_is_an_inverse_quantal_frame() {
    for g in fixtures() {
        let q = quantale_of(&g).unwrap();
        let report = q.classify();
        assert!(report.stably_gelfand.holds(), "{}", g.name);
        assert!(report.inverse_quantal_frame.holds(), "{}", g.name);
    }
}

#[test]
fn sheafification_pipeline() {
    let start = Instant::now();
    for g in fixtures() {
        let q = Arc::new(quantale_of(&g).unwrap());
        for a in catalog_actions(&g) {
            let m = module_from_action(&q, &a).unwrap();
            let (locale, sh) = sheafify_action(&m, DEFAULT_CARRIER_CAP).unwrap();
            assert!(sh.sections_cover.holds(), "{} {}", g.name, a.name);
            assert!(sh.partial_units_act.holds(), "{} {}", g.name, a.name);
            // local sections of an action module are the sets on which p is injective
            let injective: Vec<usize> = (0..m.module.len())
                .filter(|&s| {
                    let pts: Vec<usize> = (0..a.len()).filter(|&x| s >> x & 1 == 1).map(|x| a.p[x]).collect();
                    let mut d = pts.clone();
                    d.sort_unstable();
                    d.dedup();
                    d.len() == pts.len()
                })
                .collect();
            assert_eq!(locale.sections, injective);
            // sheafifying the rebuilt module returns the same Q-set along κ
            let again = sheafify(
                &EtaleLocale::new(sh.rebuilt.module.module().clone()).unwrap(),
                DEFAULT_CARRIER_CAP,
            )
            .unwrap();
            assert_eq!(again.sections.len(), sh.sections.len());
            for (i, &s) in sh.sections.iter().enumerate() {
                let ii = again.sections.binary_search(&sh.kappa[s]).unwrap();
                for (j, &t) in sh.sections.iter().enumerate() {
                    let jj = again.sections.binary_search(&sh.kappa[t]).unwrap();
                    assert_eq!(again.qset.get(ii, jj), sh.qset.get(i, j));
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn equivariant_maps_match_brute_force() {
    for g in fixtures().into_iter().take(3) {
        let acts = catalog_actions(&g);
        for a in &acts {
            for b in &acts {
                assert_eq!(equivariant_maps(a, b), common::brute_equivariant(a, b));
            }
        }
    }
}

#[test]
fn equivalence_counts() {
    for g in fixtures() {
        let r = verify_equivalence(&g, &catalog_actions(&g)).unwrap();
        assert!(r.holds(), "{:?}", r);
    }
    let z2 = Arc::new(FiniteGroupoid::cyclic(2));
    let r = verify_equivalence(&z2, &[GroupoidAction::regular(&z2)]).unwrap();
    assert_eq!((r.pairs[0].equivariant, r.pairs[0].sheaf_homs), (2, 2));
}

#[test]
fn trivial_group_recovers_functions() {
    let g = Arc::new(FiniteGroupoid::cyclic(1));
    let acts = catalog_actions(&g);
    let r = verify_equivalence(&g, &acts).unwrap();
    for p in &r.pairs {
        let n = |name: &str| acts.iter().find(|a| a.name == name).unwrap().len();
        assert_eq!(p.sheaf_homs, n(&p.target).pow(n(&p.source) as u32));
    }
    assert!(r.holds());
}
