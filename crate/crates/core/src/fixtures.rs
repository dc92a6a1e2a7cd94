//! Small actions used as a test corpus and shipped as example inputs.

use crate::deform::CocycleData;
use crate::hilbmod::Correspondence;
use crate::hilbmod::FdCStarAlgebra;
use crate::linalg::{identity, re, CMat, C64};
use crate::qcat::{Backend, Group};
use crate::spectral::{ActionData, ActionKind};
use crate::wutf::GradedBundle;

/// The trivial action of the backend's group on `⊕ M_{n_k}`.
pub fn trivial_action(backend: Backend, blocks: Vec<usize>) -> ActionData {
    let alg = FdCStarAlgebra::new(blocks).expect("blocks are nonempty");
    let n = alg.dim();
    let order = backend.group.order();
    let kind = match backend.kind {
        crate::qcat::BackendKind::Group => ActionKind::Automorphisms(vec![identity(n); order]),
        crate::qcat::BackendKind::Dual => ActionKind::Grading { basis: identity(n), degrees: vec![backend.trivial; n] },
    };
    ActionData::new(backend, alg.table(), kind)
}

/// `Z_2` swapping the summands of `C ⊕ C`.
pub fn z2_swap() -> ActionData {
    let alg = FdCStarAlgebra::new(vec![1, 1]).unwrap();
    let swap = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
    ActionData::new(Backend::abelian_group(&[2]), alg.table(), ActionKind::Automorphisms(vec![identity(2), swap]))
}

/// Left translation on `C(G)`: `(α_g f)(h) = f(g⁻¹h)`.
pub fn translation(backend: Backend) -> ActionData {
    let g = backend.group.clone();
    let n = g.order();
    let alg = FdCStarAlgebra::new(vec![1; n]).unwrap();
    let autos = (0..n)
        .map(|x| {
            let mut m = CMat::zeros(n, n);
            for h in 0..n {
                m[(g.mul[x][h], h)] = re(1.0);
            }
            m
        })
        .collect();
    ActionData::new(backend, alg.table(), ActionKind::Automorphisms(autos))
}

pub fn s3_translation() -> ActionData {
    translation(Backend::symmetric3())
}

/// `M_3` graded by `Z_3` through clock and shift: `e_{ij}` has degree `i − j`.
pub fn z3_clock_shift() -> ActionData {
    let alg = FdCStarAlgebra::new(vec![3]).unwrap();
    let degrees = (0..9).map(|p| {
        let (_, i, j) = alg.unit_of(p);
        (i + 3 - j) % 3
    });
    let kind = ActionKind::Grading { basis: identity(9), degrees: degrees.collect() };
    ActionData::new(Backend::dual(Group::cyclic(3)), alg.table(), kind)
}

/// `Z_2` acting on `M_2` by conjugation with `diag(1, −1)`.
pub fn z2_inner_m2() -> ActionData {
    let alg = FdCStarAlgebra::new(vec![2]).unwrap();
    let flip = CMat::from_diagonal(&crate::linalg::CVec::from_iterator(
        4,
        (0..4).map(|p| {
            let (_, i, j) = alg.unit_of(p);
            if i == j {
                re(1.0)
            } else {
                re(-1.0)
            }
        }),
    ));
    ActionData::new(Backend::abelian_group(&[2]), alg.table(), ActionKind::Automorphisms(vec![identity(4), flip]))
}

/// The group algebra `C[Γ]` of a finite abelian group, realized as `C^{|Γ|}`
/// through characters and graded by `λ_γ ↦ γ`.
pub fn abelian_group_algebra(orders: &[usize]) -> ActionData {
    let group = Group::abelian(orders);
    let chars = Backend::abelian_group(orders);
    let n = group.order();
    let alg = FdCStarAlgebra::new(vec![1; n]).unwrap();
    // Column γ holds λ_γ = (χ(γ))_χ.
    let basis = CMat::from_fn(n, n, |chi, g| chars.irreps[chi].matrices[g][(0, 0)]);
    let kind = ActionKind::Grading { basis, degrees: (0..n).collect() };
    ActionData::new(Backend::dual(group), alg.table(), kind)
}

/// The `Z_3`-grading of `M_3` by diagonals as a bundle over `A = C³`:
/// `M_k = span{e_{i+k,i}}` with matrix multiplication.
pub fn clock_shift_bundle() -> GradedBundle {
    let group = Group::cyclic(3);
    let base = FdCStarAlgebra::new(vec![1, 1, 1]).unwrap();
    let fiber = |k: usize| {
        let left = (0..3)
            .map(|j| CMat::from_fn(3, 3, |r, c| if r == c && j == (c + k) % 3 { re(1.0) } else { re(0.0) }))
            .collect();
        let right: Vec<CMat> =
            (0..3).map(|j| CMat::from_fn(3, 3, |r, c| if r == c && c == j { re(1.0) } else { re(0.0) })).collect();
        let inner = right.clone();
        Correspondence { algebra: base.clone(), dim: 3, left, right, inner }
    };
    let fibers = (0..3).map(fiber).collect();
    let mut mult = std::collections::BTreeMap::new();
    for a in 0..3 {
        for b in 0..3 {
            // e_{i+a,i} e_{l+b,l} = δ_{i,l+b} e_{l+a+b,l}.
            let m = CMat::from_fn(3, 9, |row, col| {
                let (i, l) = (col / 3, col % 3);
                if row == l && i == (l + b) % 3 {
                    re(1.0)
                } else {
                    re(0.0)
                }
            });
            mult.insert((a, b), m);
        }
    }
    GradedBundle { group, base, fibers, mult }
}

/// Matrix of `ē ⊗ e_{i+k,i} ↦ e_{i+k,i}` from the reconstruction of
/// [`clock_shift_bundle`] to `M_3`.
pub fn clock_shift_isomorphism(bf: &crate::reconstruct::ReconstructedAlgebra) -> CMat {
    let m3 = FdCStarAlgebra::new(vec![3]).unwrap();
    let mut out = CMat::zeros(9, bf.dim);
    for k in 0..3 {
        for i in 0..3 {
            out[(m3.index(0, (i + k) % 3, i), bf.index(k, 0, i))] = re(1.0);
        }
    }
    out
}

/// Named corpus of actions on which every round trip must close.
pub fn corpus() -> Vec<(&'static str, ActionData)> {
    vec![
        ("trivial_z2_on_c", trivial_action(Backend::abelian_group(&[2]), vec![1])),
        ("trivial_s3_on_c_m2", trivial_action(Backend::symmetric3(), vec![1, 2])),
        ("trivial_dual_z2_on_m2", trivial_action(Backend::dual(Group::cyclic(2)), vec![2])),
        ("z2_swap", z2_swap()),
        ("s3_translation", s3_translation()),
        ("z3_clock_shift", z3_clock_shift()),
        ("z2_inner_m2", z2_inner_m2()),
    ]
}

/// The bicharacter `Ω(a, b) = e^{2πi a₂ b₁ / n}` on `Z_n × Z_n`, on the dual
/// backend directly or transported to characters on the group backend.
pub fn bicharacter(backend: &Backend, n: usize) -> CocycleData {
    let value = |a: usize, b: usize| root_of_unity((a % n) * (b / n) % n, n);
    match backend.kind {
        crate::qcat::BackendKind::Dual => {
            let m = n * n;
            CocycleData::new(backend, backend.kind, CMat::from_fn(m, m, value)).expect("bicharacter shape")
        }
        crate::qcat::BackendKind::Group => CocycleData::from_characters(backend, value).expect("abelian backend"),
    }
}

/// A coboundary `(v ⊗ v)Δ̂(v)*` with `v` a seeded random unitary in every irrep.
pub fn random_coboundary(backend: &Backend, seed: u64) -> CocycleData {
    let mut rng = crate::linalg::seeded_rng(seed);
    let vs: Vec<CMat> = (0..backend.n_irreps())
        .map(|a| crate::linalg::random_complex(&mut rng, backend.dim(a), backend.dim(a)).qr().q())
        .collect();
    CocycleData::coboundary(backend, &vs).expect("coboundary of a unitary is valid")
}

/// Pairs of an action and a cocycle on which deformation is exercised.
pub fn deformation_corpus() -> Vec<(&'static str, ActionData, CocycleData)> {
    let z22 = Backend::abelian_group(&[2, 2]);
    let dual_z22 = abelian_group_algebra(&[2, 2]);
    let clock = z3_clock_shift();
    vec![
        (
            "trivial_s3_on_c_m2",
            trivial_action(Backend::symmetric3(), vec![1, 2]),
            random_coboundary(&Backend::symmetric3(), 1),
        ),
        ("z2_swap", z2_swap(), random_coboundary(&Backend::abelian_group(&[2]), 2)),
        ("s3_translation", s3_translation(), random_coboundary(&Backend::symmetric3(), 3)),
        ("z2_inner_m2", z2_inner_m2(), random_coboundary(&Backend::abelian_group(&[2]), 4)),
        ("z3_clock_shift", clock.clone(), random_coboundary(&clock.backend, 5)),
        ("z2x2_group_algebra", dual_z22.clone(), bicharacter(&dual_z22.backend, 2)),
        ("z2x2_translation", translation(z22.clone()), bicharacter(&z22, 2)),
    ]
}

/// A scalar used by a few fixtures: `e^{2πi k / n}`.
pub fn root_of_unity(k: usize, n: usize) -> C64 {
    let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
    C64::new(t.cos(), t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::TAU;
    use crate::spectral::{roundtrip_check, spectral_functor};

    #[test]
    fn corpus_actions_are_valid_and_roundtrip() {
        for (name, act) in corpus() {
            assert!(act.validate(TAU).unwrap().passed(), "{name}");
            let sf = spectral_functor(&act).unwrap();
            let rep = sf.functor.validate(TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
            let rep = sf.functor.bullet_report(TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
            let (cert, _) = roundtrip_check(&act, TAU).unwrap();
            assert!(cert.checks.passed(), "{name}: {:?}", cert.checks.failures());
        }
    }

    #[test]
    fn spectral_of_reconstruction_is_naturally_isomorphic() {
        for (name, act) in corpus() {
            let sf = spectral_functor(&act).unwrap();
            let rep = crate::spectral::functor_roundtrip(&sf.functor, TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn s3_translation_satisfies_peter_weyl() {
        let sf = spectral_functor(&s3_translation()).unwrap();
        let (dims, total) = sf.peter_weyl();
        assert_eq!(total, 6);
        for (a, m) in dims.iter().enumerate() {
            assert_eq!(*m, sf.functor.category.dim(a));
        }
    }

    #[test]
    fn deformation_corpus_cross_tests() {
        for (name, act, om) in deformation_corpus() {
            let rep = crate::deform::check_cocycle(&act.backend, &om, TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
            let rep = crate::deform::cross_test(&act, &om, TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
            let sf = spectral_functor(&act).unwrap();
            let fd = crate::deform::deform_functor(&sf.functor, &om).unwrap();
            let rep = fd.bullet_report(TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn group_algebra_grading_is_valid() {
        let act = abelian_group_algebra(&[2, 2]);
        assert!(act.validate(TAU).unwrap().passed());
        let (cert, _) = roundtrip_check(&act, TAU).unwrap();
        assert!(cert.checks.passed(), "{:?}", cert.checks.failures());
    }

    #[test]
    fn involution_ignores_phases_of_conjugate_solutions() {
        for (name, act) in corpus() {
            let sf = spectral_functor(&act).unwrap();
            let f = &sf.functor;
            let n = f.category.n_irreps();
            let phases: Vec<C64> = (0..n).map(|a| root_of_unity(a + 1, 7)).collect();
            let mut g = f.clone();
            g.category = f.category.with_conjugate_phases(&phases);
            let b0 = crate::reconstruct::build(f, TAU).unwrap();
            let b1 = crate::reconstruct::build(&g, TAU).unwrap();
            let d = crate::linalg::max_abs(&(&b0.table.star - &b1.table.star));
            assert!(d < 1e-9, "{name}: {d}");
        }
    }

    #[test]
    fn clock_shift_bundle_reconstructs_m3() {
        let bundle = clock_shift_bundle();
        assert!(bundle.validate(TAU).unwrap().passed());
        let f = bundle.to_functor(TAU).unwrap();
        let bf = crate::reconstruct::build(&f, TAU).unwrap();
        let m3 = FdCStarAlgebra::new(vec![3]).unwrap().table();
        let rep = crate::spectral::algebra_isomorphism(&bf.table, &m3, &clock_shift_isomorphism(&bf), TAU);
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(bf.table.block_sizes(0), Some(vec![3]));
    }
}
