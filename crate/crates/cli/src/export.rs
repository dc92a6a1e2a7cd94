//! Writes the fixture corpus as JSON files.

use std::path::Path;

use cqg_duality::fixtures;
use cqg_duality::io::{
    mat_to_json, write_json, ActionFile, BackendFile, CocycleFile, FunctorFile, GradedFile, ModuleFile,
};
use cqg_duality::linalg::{re, CMat, CVec};
use cqg_duality::qcat::{Backend, Group};
use cqg_duality::spectral::{spectral_functor, ActionData};
use cqg_duality::{Error, Result};
use serde_json::Value;

fn backends() -> Vec<(&'static str, Backend)> {
    vec![
        ("z2", Backend::abelian_group(&[2])),
        ("z2x2", Backend::abelian_group(&[2, 2])),
        ("s3", Backend::symmetric3()),
        ("z2_dual", Backend::dual(Group::cyclic(2))),
        ("z3_dual", Backend::dual(Group::cyclic(3))),
        ("z2x2_dual", Backend::dual(Group::abelian(&[2, 2]))),
    ]
}

fn backend_ref(be: &Backend) -> Result<String> {
    backends()
        .into_iter()
        .find(|(_, b)| b.kind == be.kind && b.group == be.group)
        .map(|(name, _)| format!("../backends/{name}.json"))
        .ok_or_else(|| Error::Config("fixture backend has no file".into()))
}

fn action_file(act: &ActionData) -> Result<ActionFile> {
    let mut af = ActionFile::from_action(act)?;
    af.backend_ref = Some(backend_ref(&act.backend)?);
    Ok(af)
}

/// Writes every fixture under `dir` and returns the number of files.
pub fn export(dir: &Path) -> Result<usize> {
    for sub in ["backends", "actions", "functors", "graded", "cocycles"] {
        std::fs::create_dir_all(dir.join(sub)).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
    }
    let mut count = 0;
    let mut write = |rel: String, value: Value| -> Result<()> {
        write_json(&dir.join(rel), &value)?;
        count += 1;
        Ok(())
    };
    for (name, be) in backends() {
        write(format!("backends/{name}.json"), value(&BackendFile::from_backend(&be)))?;
    }
    let mut actions = fixtures::corpus();
    let z22 = Backend::abelian_group(&[2, 2]);
    actions.push(("z2x2_group_algebra", fixtures::abelian_group_algebra(&[2, 2])));
    actions.push(("z2x2_translation", fixtures::translation(z22)));
    for (name, act) in &actions {
        write(format!("actions/{name}.json"), value(&action_file(act)?))?;
    }
    for (name, act) in fixtures::corpus() {
        let sf = spectral_functor(&act)?;
        let ff = FunctorFile::from_functor(&sf.functor, Some(backend_ref(&act.backend)?));
        write(format!("functors/{name}.json"), value(&ff))?;
    }

    // Modules for `fullness` and `module-functor`: a corner of C², which is not
    // full, and the nontrivial twist of the swap action, which is.
    let corner = fixtures::trivial_action(Backend::abelian_group(&[2]), vec![1, 1]);
    let mut af = action_file(&corner)?;
    let p = CMat::from_diagonal(&CVec::from_vec(vec![re(1.0), re(0.0)]));
    let trivial = &corner.backend.irreps[corner.backend.trivial].label;
    af.module = Some(ModuleFile { rep: trivial.clone(), basis: Some(mat_to_json(&p)) });
    write("actions/z2_corner_module.json".into(), value(&af))?;
    let swap = fixtures::z2_swap();
    let mut af = action_file(&swap)?;
    let sign = (0..swap.backend.n_irreps()).find(|&a| a != swap.backend.trivial).expect("Z2 has two irreps");
    af.module = Some(ModuleFile { rep: swap.backend.irreps[sign].label.clone(), basis: None });
    write("actions/z2_swap_twisted_module.json".into(), value(&af))?;

    write("graded/clock_shift.json".into(), value(&GradedFile::from_bundle(&fixtures::clock_shift_bundle())))?;
    for (name, act, om) in fixtures::deformation_corpus() {
        let mut cf = CocycleFile::from_cocycle(&om, &act.backend);
        cf.backend_ref = Some(backend_ref(&act.backend)?);
        write(format!("cocycles/{name}.json"), value(&cf))?;
    }
    Ok(count)
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("fixture serializes")
}
