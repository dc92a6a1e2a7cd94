//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p cqg-duality --test acceptance`.

use std::path::Path;

use serde::Serialize;

use cqg_duality::deform::{cross_test, deform_action, u_element, CocycleData};
use cqg_duality::equivariant::{fullness_check, EquivariantModule};
use cqg_duality::fixtures;
use cqg_duality::hilbmod::{Correspondence, FdCStarAlgebra};
use cqg_duality::io::{load_json, BackendFile, FunctorFile};
use cqg_duality::linalg::{identity, random_vec, re, seeded_rng, stack_columns, CMat, CVec};
use cqg_duality::qcat::{Backend, Group, RepCategory};
use cqg_duality::reconstruct::{build, ReconstructedAlgebra};
use cqg_duality::spectral::{algebra_isomorphism, functor_roundtrip, roundtrip_check, spectral_functor, ActionKind};
use cqg_duality::wutf::FunctorData;

const TOL: f64 = 1e-9;

#[derive(Serialize)]
struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    residual: f64,
    detail: String,
}

fn outcome(id: usize, title: &'static str, passed: bool, residual: f64, detail: String) -> Outcome {
    Outcome { id, title, passed, residual, detail }
}

fn conjugate_equations() -> Outcome {
    let backends = [
        ("S3", Backend::symmetric3()),
        ("Z4", Backend::abelian_group(&[4])),
        ("Z2xZ2", Backend::abelian_group(&[2, 2])),
        ("dual S3", Backend::dual(Group::symmetric3())),
        ("dual Z4", Backend::dual(Group::cyclic(4))),
        ("dual Z2xZ2", Backend::dual(Group::abelian(&[2, 2]))),
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (_, be) in backends {
        let cat = RepCategory::new(be);
        for a in 0..cat.n_irreps() {
            let sol = cat.conj_solution(a);
            let (r1, r2) = sol.equation_residuals();
            let (n1, n2) = sol.norms_squared();
            let q = cat.qdim(a);
            worst = worst.max(r1).max(r2).max((n1 - q).abs()).max((n2 - q).abs());
            count += 1;
        }
    }
    outcome(1, "conjugate equations", worst < TOL, worst, format!("{count} irreps over six backends"))
}

fn peter_weyl() -> Outcome {
    let act = fixtures::s3_translation();
    let sf = spectral_functor(&act).unwrap();
    let (dims, total) = sf.peter_weyl();
    let cat = &sf.functor.category;
    let each = (0..cat.n_irreps()).all(|a| dims[a] == cat.dim(a));
    outcome(2, "Peter-Weyl count", total == 6 && each, 0.0, format!("multiplicities {dims:?}, total {total}"))
}

fn roundtrip_corpus() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (name, act) in fixtures::corpus() {
        let (cert, _) = roundtrip_check(&act, TOL).unwrap();
        worst = worst.max(cert.checks.max_residual());
        if !cert.checks.passed() {
            failed.push(name);
        }
    }
    outcome(3, "action round trip", failed.is_empty(), worst, format!("failed: {failed:?}"))
}

fn fixture_functors() -> Vec<(String, FunctorData)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/functors");
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    let mut out = Vec::new();
    for path in names {
        let ff: FunctorFile = load_json(&path).unwrap();
        let bpath = dir.join(ff.backend_ref.as_deref().unwrap());
        let be = load_json::<BackendFile>(&bpath).unwrap().to_backend(TOL).unwrap();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        out.push((name, ff.to_functor(&be).unwrap()));
    }
    out.push(("clock_shift_bundle".into(), fixtures::clock_shift_bundle().to_functor(TOL).unwrap()));
    out
}

fn functor_roundtrips() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let functors = fixture_functors();
    for (name, f) in &functors {
        let rep = functor_roundtrip(f, TOL).unwrap();
        worst = worst.max(rep.max_residual());
        if !rep.passed() {
            failed.push(name.clone());
        }
    }
    let detail = format!("{} functors, failed: {failed:?}", functors.len());
    outcome(4, "functor round trip", failed.is_empty(), worst, detail)
}

fn axiom_v_witness() -> Outcome {
    let act = fixtures::trivial_action(Backend::abelian_group(&[2]), vec![1]);
    let f = spectral_functor(&act).unwrap().functor;
    let (t, s) = (f.category.trivial(), 1 - f.category.trivial());
    let base = f.validate(TOL).unwrap();
    // Inject M_sign = C with a vanishing pairing into M_triv, keeping F_2 non-surjective.
    let mut g = f.clone();
    g.modules[s] = Correspondence::canonical(&f.base);
    for (key, v) in [((t, s, s), 1.0), ((s, t, s), 1.0), ((s, s, t), 0.0)] {
        g.phi.insert(key, vec![CMat::from_element(1, 1, re(v))]);
    }
    let mutated = g.validate(TOL).unwrap();
    let v = mutated.get("v_exchange").unwrap().residual;
    let ok = f.dim(s) == 0 && base.passed() && v > 1e-3;
    let failing: Vec<&str> = mutated.failures().iter().map(|c| c.name.as_str()).collect();
    outcome(5, "axiom (v) witness", ok, v, format!("fixture passes; mutation fails {failing:?}"))
}

fn fell_bundle() -> Outcome {
    let bundle = fixtures::clock_shift_bundle();
    let brep = bundle.validate(TOL).unwrap();
    let f = bundle.to_functor(TOL).unwrap();
    let frep = f.validate(TOL).unwrap();
    let bf = build(&f, TOL).unwrap();
    let iso = fixtures::clock_shift_isomorphism(&bf);
    let m3 = FdCStarAlgebra::new(vec![3]).unwrap().table();
    let irep = algebra_isomorphism(&bf.table, &m3, &iso, TOL);
    let simple = bf.table.center().ncols() == 1 && bf.table.block_sizes(0) == Some(vec![3]);
    let ok = brep.passed() && frep.passed() && irep.passed() && simple;
    let detail = format!("dim {}, center dim {}", bf.dim, bf.table.center().ncols());
    outcome(6, "graded bundle gives M3", ok, irep.max_residual(), detail)
}

fn built_algebras() -> Vec<(String, ReconstructedAlgebra)> {
    fixture_functors().into_iter().map(|(n, f)| (n, build(&f, TOL).unwrap())).collect()
}

fn c_star_identity(seed: u64) -> Outcome {
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    let algebras = built_algebras();
    for (_, bf) in &algebras {
        for _ in 0..100 {
            let x = random_vec(&mut rng, bf.dim);
            let n = bf.regular_norm(&x);
            let xx = bf.multiply(&bf.star(&x), &x);
            worst = worst.max((bf.regular_norm(&xx) - n * n).abs() / (n * n));
        }
    }
    outcome(7, "C*-identity", worst < 1e-8, worst, format!("100 elements in each of {} algebras", algebras.len()))
}

/// `λ_a ↦ X^{a₁} Z^{a₀}` with `a = a₀ + 2a₁`.
fn pauli(a: usize) -> CMat {
    let x = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
    let z = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]);
    let pow = |m: &CMat, k: usize| if k == 0 { identity(2) } else { m.clone() };
    pow(&x, a / 2) * pow(&z, a % 2)
}

fn pauli_deformation() -> Outcome {
    let act = fixtures::abelian_group_algebra(&[2, 2]);
    let be = act.backend.clone();
    let om = fixtures::bicharacter(&be, 2);
    let (def, drep) = deform_action(&act, &om, TOL).unwrap();
    let ActionKind::Grading { basis, degrees } = &act.kind else { unreachable!() };
    let m2 = FdCStarAlgebra::new(vec![2]).unwrap();
    let images: Vec<CVec> = degrees.iter().map(|&g| m2.from_matrix(&pauli(g))).collect();
    let map = stack_columns(&images, 4) * basis.clone().try_inverse().unwrap();
    let irep = algebra_isomorphism(&def.algebra, &m2.table(), &map, TOL);
    let simple = def.algebra.block_sizes(0) == Some(vec![2]);

    let (same, _) = deform_action(&act, &CocycleData::trivial(&be), TOL).unwrap();
    let exact = same.algebra.left == act.algebra.left
        && same.algebra.star == act.algebra.star
        && same.algebra.unit == act.algebra.unit;
    let ok = drep.passed() && irep.passed() && simple && exact;
    let detail = format!("blocks {:?}, trivial cocycle exact: {exact}", def.algebra.block_sizes(0));
    outcome(8, "bicharacter deformation", ok, irep.max_residual(), detail)
}

fn deformation_cross_tests() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let corpus = fixtures::deformation_corpus();
    for (name, act, om) in &corpus {
        let rep = cross_test(act, om, TOL).unwrap();
        worst = worst.max(rep.max_residual());
        if !rep.passed() {
            failed.push(*name);
        }
    }
    outcome(
        9,
        "deformation cross-test",
        failed.is_empty(),
        worst,
        format!("{} pairs, failed: {failed:?}", corpus.len()),
    )
}

fn u_elements() -> Outcome {
    let mut cocycles: Vec<(Backend, CocycleData)> =
        fixtures::deformation_corpus().into_iter().map(|(_, act, om)| (act.backend, om)).collect();
    for be in [Backend::abelian_group(&[2, 2]), Backend::dual(Group::abelian(&[2, 2]))] {
        let om = fixtures::bicharacter(&be, 2);
        cocycles.push((be, om));
    }
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (be, om) in &cocycles {
        let (_, rep) = u_element(be, om, TOL).unwrap();
        worst = worst.max(rep.max_residual());
        ok &= rep.passed()
            && rep.get("omega_r_equals_u_r").is_some()
            && rep.get("inverse_is_antipode_of_adjoint").is_some();
    }
    outcome(10, "u-element identities", ok, worst, format!("{} cocycles", cocycles.len()))
}

fn fullness() -> Outcome {
    let mut min_c = f64::INFINITY;
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let mut count = 0;
    for (name, act) in fixtures::corpus() {
        let be = act.backend.clone();
        let reps = std::iter::once(be.trivial_rep(1)).chain((0..be.n_irreps()).map(|a| be.rep(a)));
        for rep in reps {
            let m = EquivariantModule::free(act.clone(), rep, TOL).unwrap();
            let r = fullness_check(&m, TOL);
            count += 1;
            min_c = min_c.min(r.c);
            worst = worst.max(r.isometry_residual);
            if !(r.full && r.c > 0.0 && r.isometry_residual < TOL) {
                failed.push(name);
            }
        }
    }
    let corner = fixtures::trivial_action(Backend::abelian_group(&[2]), vec![1, 1]);
    let p = CMat::from_diagonal(&CVec::from_vec(vec![re(1.0), re(0.0)]));
    let m = EquivariantModule::new(corner.clone(), corner.backend.trivial_rep(1), &p, TOL).unwrap();
    let proper = fullness_check(&m, TOL);
    let ok = failed.is_empty() && !proper.full;
    let detail = format!("{count} modules, min c {min_c:.3}, corner rank {} of {}", proper.rank, proper.dim);
    outcome(11, "fullness criterion", ok, worst, detail)
}

fn suite(seed: u64) -> Vec<Outcome> {
    vec![
        conjugate_equations(),
        peter_weyl(),
        roundtrip_corpus(),
        functor_roundtrips(),
        axiom_v_witness(),
        fell_bundle(),
        c_star_identity(seed),
        pauli_deformation(),
        deformation_cross_tests(),
        u_elements(),
        fullness(),
    ]
}

fn main() {
    let seed = 0;
    let first = serde_json::to_string_pretty(&suite(seed)).unwrap();
    let second_run = suite(seed);
    let second = serde_json::to_string_pretty(&second_run).unwrap();
    let mut all = second_run;
    all.push(outcome(12, "deterministic reports", first == second, 0.0, format!("{} bytes per run", first.len())));
    let mut ok = true;
    for o in &all {
        ok &= o.passed;
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {:<26} residual {:.2e}  {}", o.id, o.title, o.residual, o.detail);
    }
    if !ok {
        std::process::exit(1);
    }
}
