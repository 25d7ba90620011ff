mod common;

use std::sync::Arc;

use qlab_core::catalog;
use qlab_core::hilbert::{
    adjoint, compose, functor_m, hom_from_relation, hom_violation, is_direct_image, join_homs, local_sections,
    module_from_qset, module_support, qset_from_basis, representation_iso, singleton_section_bridge,
    top_action_identities, PreHilbertModule, DEFAULT_CARRIER_CAP,
};
use qlab_core::qmatrix::{singletons, QSet, Strategy};
use qlab_core::{Elem, Quantale};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn regular_module_sections() {
    let r = PreHilbertModule::regular(Arc::new(catalog::quantale_r4()));
    assert_eq!(r.hilbert_sections(), vec![0, 1]);
    let q = Arc::new(catalog::relq(2));
    let e = q.unit().unwrap();
    let x = PreHilbertModule::regular(q.clone());
    // ⟨x,s⟩s = xs*s ≤ x for all x iff s*s ≤ e
    let brute: Vec<Elem> = (0..q.len()).filter(|&s| q.leq(q.mul(q.inv(s), s), e)).collect();
    assert_eq!(x.hilbert_sections(), brute);
    assert!(x.is_hilbert_basis(&[e]).holds());
}

#[test]
fn point_module_is_the_principal_ideal() {
    let q = Arc::new(catalog::relq(2));
    for p in q.projections() {
        let m = module_from_qset(&QSet::point(q.clone(), p).unwrap(), DEFAULT_CARRIER_CAP).unwrap();
        let mut ideal: Vec<Vec<Elem>> = (0..q.len()).map(|v| vec![q.mul(v, p)]).collect();
        ideal.sort();
        ideal.dedup();
        assert_eq!(m.vectors, ideal);
        assert!(m.module.validate().is_empty());
    }
}

#[test]
fn matrix_modules_are_hilbert_modules() {
    for name in ["relq2", "egger8", "quantale_r4", "z3", "frame_diamond"] {
        for (a, x) in common::sampled_modules(name, 1, 6) {
            assert!(x.validate().is_empty(), "{name}");
            assert!(x.nondegenerate().holds(), "{name}");
            assert!(x.has_enough_sections(), "{name} {:?}", a.matrix().to_rows());
        }
    }
}

#[test]
fn parseval_and_shrinking() {
    for name in ["relq2", "egger8", "z2", "frame_chain3"] {
        for (_, x) in common::sampled_modules(name, 2, 5) {
            let mut sigma = x.hilbert_sections();
            assert_eq!(x.parseval_witness(&sigma), None);
            if x.len() == 1 {
                continue;
            }
            while x.basis_witness(&sigma).is_none() {
                assert_eq!(x.parseval_witness(&sigma), None, "{name}");
                sigma.pop();
            }
            assert!(x.parseval_witness(&sigma).is_some(), "{name}");
        }
    }
}

#[test]
fn minimal_basis_is_a_basis() {
    for (_, x) in common::sampled_modules("relq2", 3, 5) {
        let b = x.minimal_basis().unwrap();
        assert!(x.is_hilbert_basis(&b).holds());
        for i in 0..b.len() {
            let mut smaller = b.clone();
            smaller.remove(i);
            assert!(x.basis_witness(&smaller).is_some());
        }
    }
}

/// Every table satisfying the hom laws, found by brute force over generator images.
fn brute_homs(src: &PreHilbertModule, gens: &[Elem], tgt: &PreHilbertModule) -> Vec<Vec<Elem>> {
    let k = gens.len();
    let mut out = Vec::new();
    for code in 0..tgt.len().pow(k as u32) {
        let images: Vec<Elem> = (0..k).map(|i| code / tgt.len().pow(i as u32) % tgt.len()).collect();
        let table: Vec<Elem> = (0..src.len())
            .map(|x| {
                gens.iter()
                    .zip(&images)
                    .fold(tgt.bottom(), |acc, (&s, &y)| tgt.join(acc, tgt.act(src.ip(x, s), y)))
            })
            .collect();
        if hom_violation(src.module(), tgt.module(), &table).is_none()
            && gens.iter().zip(&images).all(|(&g, &y)| table[g] == y)
        {
            out.push(table);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn hom_enumeration_matches_brute_force() {
    for name in ["relq2", "z3", "quantale_r4"] {
        let mods = common::sampled_modules(name, 4, 2);
        for (_, x) in &mods {
            let gens = x.minimal_basis().unwrap();
            for (_, y) in &mods {
                if y.len().pow(gens.len() as u32) > 20_000 {
                    continue;
                }
                let mut fast = common::all_homs(x, &gens, y);
                fast.sort();
                assert_eq!(fast, brute_homs(x, &gens, y), "{name}");
            }
        }
    }
}

#[test]
fn adjoints_and_matrices_of_homs() {
    for name in ["relq2", "egger8", "z2", "frame_diamond"] {
        let mods = common::sampled_modules(name, 5, 2);
        for (_, x) in &mods {
            let bx = x.hilbert_sections();
            let gx = x.minimal_basis().unwrap();
            for (_, y) in &mods {
                let by = y.hilbert_sections();
                let gy = y.minimal_basis().unwrap();
                if y.len().pow(gx.len() as u32) > 20_000 {
                    continue;
                }
                let homs = common::all_homs(x, &gx, y);
                assert!(!homs.is_empty());
                for f in homs.iter().take(40) {
                    let dag = adjoint(x, &bx, y, f).unwrap();
                    assert_eq!(
                        adjoint(x, &gx, y, f).unwrap(),
                        dag,
                        "adjoint does not depend on the basis"
                    );
                    assert_eq!(hom_violation(y.module(), x.module(), &dag), None);
                    assert_eq!(&adjoint(y, &by, x, &dag).unwrap(), f);
                    assert_eq!(&adjoint(y, &gy, x, &dag).unwrap(), f);
                    let direct = is_direct_image(x.module(), y.module(), f, &dag);
                    let galois = (0..x.len()).all(|u| (0..y.len()).all(|v| y.leq(f[u], v) == x.leq(u, dag[v])));
                    assert_eq!(direct, galois);
                    let m = functor_m(&bx, y, &by, f);
                    let mdag = functor_m(&by, x, &bx, &dag);
                    assert_eq!(m.adjoint(), mdag);
                }
                for f in homs.iter().take(6) {
                    for g in homs.iter().take(6) {
                        let j = join_homs(y.module(), f, g);
                        let dj = adjoint(x, &bx, y, &j).unwrap();
                        let df = adjoint(x, &bx, y, f).unwrap();
                        let dg = adjoint(x, &bx, y, g).unwrap();
                        assert_eq!(dj, join_homs(x.module(), &df, &dg));
                    }
                }
            }
        }
    }
}

#[test]
fn functor_m_is_functorial() {
    let mods = common::sampled_modules("relq2", 6, 2);
    for (_, x) in mods.iter().take(3) {
        let bx = x.hilbert_sections();
        let id: Vec<Elem> = (0..x.len()).collect();
        let ax = qset_from_basis(x, &bx).unwrap();
        assert_eq!(&functor_m(&bx, x, &bx, &id), ax.matrix());
        for (_, y) in mods.iter().take(3) {
            let by = y.hilbert_sections();
            let gx = x.minimal_basis().unwrap();
            let gy = y.minimal_basis().unwrap();
            let fs = common::all_homs(x, &gx, y);
            for (_, z) in mods.iter().take(3) {
                let bz = z.hilbert_sections();
                let gs = common::all_homs(y, &gy, z);
                for f in fs.iter().take(5) {
                    for g in gs.iter().take(5) {
                        let lhs = functor_m(&bx, z, &bz, &compose(f, g));
                        let rhs = functor_m(&by, z, &bz, g).mul(&functor_m(&bx, y, &by, f)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn homs_from_relations_round_trip() {
    let q = Arc::new(catalog::relq(2));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sets = common::sample_qsets(&q, 2, 3, &mut rng);
    for a in &sets {
        let src = module_from_qset(a, DEFAULT_CARRIER_CAP).unwrap();
        for b in &sets {
            let tgt = module_from_qset(b, DEFAULT_CARRIER_CAP).unwrap().module;
            let by = tgt.hilbert_sections();
            for f in common::all_homs(&src.module, &src.basis, &tgt).iter().take(30) {
                let h = functor_m(&src.basis, &tgt, &by, f);
                assert_eq!(&hom_from_relation(&src, &tgt, &by, &h).unwrap(), f);
            }
        }
    }
}

#[test]
fn representation_round_trip() {
    for name in ["relq2", "egger8", "quantale_r4", "z3", "frame_chain3"] {
        for (_, x) in common::sampled_modules(name, 9, 4) {
            for sigma in [x.hilbert_sections(), x.minimal_basis().unwrap()] {
                let (m, psi) = representation_iso(&x, &sigma, DEFAULT_CARRIER_CAP).unwrap();
                assert_eq!(psi.len(), x.len());
                assert_eq!(m.basis.iter().map(|&b| psi[b]).collect::<Vec<_>>(), sigma);
            }
        }
    }
}

#[test]
fn sections_rebuild_the_completion() {
    let mut count = 0;
    for name in ["relq2", "quantale_r4", "z2", "z3", "frame_diamond", "frame_chain3"] {
        let q = Arc::new(catalog::quantale_by_name(name).unwrap());
        assert!(q.is_stably_gelfand(), "{name}");
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for a in common::sample_qsets(&q, n, 4, &mut rng) {
                common::assert_completion_matches(&a);
                count += 1;
            }
        }
    }
    assert!(count >= 50);
}

#[test]
fn bridge_on_sampled_qsets() {
    for name in ["relq2", "z2", "frame_bool2"] {
        let q = Arc::new(catalog::quantale_by_name(name).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 1..=3 {
            for a in common::sample_qsets(&q, n, 4, &mut rng) {
                let r = singleton_section_bridge(&a, Strategy::default(), DEFAULT_CARRIER_CAP).unwrap();
                assert_eq!(r.singletons.len(), singletons(&a, Strategy::Exhaustive).len());
                let x = module_from_qset(&a, DEFAULT_CARRIER_CAP).unwrap();
                assert_eq!(r.column_section, x.basis);
            }
        }
    }
}

#[test]
fn bridge_rejects_non_stably_gelfand() {
    let q: Arc<Quantale> = Arc::new(catalog::egger8());
    if q.is_stably_gelfand() {
        return;
    }
    let a = QSet::point(q.clone(), q.unit().unwrap()).unwrap();
    assert!(singleton_section_bridge(&a, Strategy::default(), DEFAULT_CARRIER_CAP).is_err());
}

#[test]
fn supported_modules_are_stable() {
    for name in ["relq2", "relq3", "egger8"] {
        let per = if name == "relq3" { 2 } else { 6 };
        for (_, x) in common::sampled_modules(name, 41, per) {
            if name == "relq3" && x.len() > 600 {
                continue;
            }
            let s = module_support(&x).unwrap();
            let v = s.stability();
            assert!(v.iter().all(|c| c.holds()), "{name}");
            assert!(v.iter().all(|c| c.holds() == v[0].holds()));
            assert!(s.top_action.holds());
            assert!(top_action_identities(&x).holds());
        }
    }
}

#[test]
fn local_sections_over_frames_and_relations() {
    for name in ["frame_bool2", "frame_chain3", "relq2"] {
        for (_, x) in common::sampled_modules(name, 51, 4) {
            let s = module_support(&x).unwrap();
            let l = local_sections(&s).unwrap();
            assert!(l.local.contains(&x.bottom()));
            assert!(l.hilbert.iter().all(|h| l.local.contains(h)));
            assert_eq!(l.equal, l.join_decomposition);
        }
    }
}

#[test]
fn module_support_needs_stable_support() {
    let q = Arc::new(catalog::zero2());
    assert!(module_support(&PreHilbertModule::regular(q)).is_err());
}
