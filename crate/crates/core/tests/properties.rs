use proptest::prelude::*;

use cqg_duality::deform::{check_cocycle, cross_test, u_element};
use cqg_duality::fixtures;
use cqg_duality::hilbmod::FdCStarAlgebra;
use cqg_duality::io::CocycleFile;
use cqg_duality::linalg::{identity, max_abs, random_complex, random_vec, seeded_rng, CMat};
use cqg_duality::qcat::{Backend, Group, TAU};
use cqg_duality::spectral::spectral_functor;

fn backends() -> Vec<Backend> {
    vec![
        Backend::symmetric3(),
        Backend::abelian_group(&[4]),
        Backend::abelian_group(&[2, 2]),
        Backend::dual(Group::symmetric3()),
        Backend::dual(Group::cyclic(3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn block_algebras_satisfy_c_star_identity(blocks in prop::collection::vec(1usize..4, 1..4), seed in any::<u64>()) {
        let alg = FdCStarAlgebra::new(blocks).unwrap();
        let t = alg.table();
        prop_assert!(t.axiom_residuals().max() < 1e-12);
        let mut rng = seeded_rng(seed);
        let x = random_vec(&mut rng, alg.dim());
        let n = t.norm(&x);
        let xx = t.mul(&t.star(&x), &x);
        prop_assert!((t.norm(&xx) - n * n).abs() <= 1e-10 * n * n);
        prop_assert!(max_abs(&(alg.to_matrix(&alg.from_matrix(&alg.to_matrix(&x))) - alg.to_matrix(&x))) < 1e-14);
    }

    #[test]
    fn tensor_products_decompose_unitarily(which in 0usize..5, a in 0usize..8, b in 0usize..8) {
        let be = &backends()[which];
        let (a, b) = (a % be.n_irreps(), b % be.n_irreps());
        let u = be.tensor(&be.rep(a), &be.rep(b)).unwrap();
        let parts = be.decompose(&u).unwrap();
        let d = be.dim(a) * be.dim(b);
        let mut sum = CMat::zeros(d, d);
        for (c, w) in &parts {
            prop_assert_eq!(w.ncols(), be.dim(*c));
            prop_assert!(max_abs(&(w.adjoint() * w - identity(be.dim(*c)))) < 1e-10);
            sum += w * w.adjoint();
        }
        prop_assert!(max_abs(&(sum - identity(d))) < 1e-10);
    }

    #[test]
    fn coboundaries_are_cocycles_with_u_elements(which in 0usize..5, seed in any::<u64>()) {
        let be = &backends()[which];
        let om = fixtures::random_coboundary(be, seed);
        prop_assert!(check_cocycle(be, &om, TAU).unwrap().passed());
        let (_, rep) = u_element(be, &om, TAU).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
        let file = CocycleFile::from_cocycle(&om, be);
        let back = file.to_cocycle(be).unwrap();
        prop_assert!(max_abs(&(back.values - &om.values)) < 1e-15);
    }

    #[test]
    fn phi_perturbations_are_detected(key_pick in any::<prop::sample::Index>(), seed in any::<u64>(), scale in 1e-3f64..1.0) {
        let f = spectral_functor(&fixtures::s3_translation()).unwrap().functor;
        let keys: Vec<_> = f.phi.keys().cloned().filter(|k| !f.phi[k].is_empty()).collect();
        let key = keys[key_pick.index(keys.len())];
        let t = &f.phi[&key][0];
        let mut rng = seeded_rng(seed);
        let mut delta = random_complex(&mut rng, t.nrows(), t.ncols());
        delta *= cqg_duality::linalg::re(scale / max_abs(&delta));
        let rep = f.perturbed(key, 0, &delta).validate(TAU).unwrap();
        prop_assert!(!rep.passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn deformation_by_coboundary_cross_tests(pick in 0usize..4, seed in any::<u64>()) {
        let act = match pick {
            0 => fixtures::z2_swap(),
            1 => fixtures::s3_translation(),
            2 => fixtures::z2_inner_m2(),
            _ => fixtures::z3_clock_shift(),
        };
        let om = fixtures::random_coboundary(&act.backend, seed);
        let rep = cross_test(&act, &om, TAU).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
    }
}
