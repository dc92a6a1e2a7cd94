use std::path::{Path, PathBuf};

use cqg_duality::deform::cross_test;
use cqg_duality::io::{load_json, ActionFile, BackendFile, CocycleFile};
use cqg_duality::qcat::{Backend, TAU};
use cqg_duality::spectral::roundtrip_check;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(sub)
}

fn files(sub: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir(sub)).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn backend(from: &Path, reference: &str) -> Backend {
    let path = from.parent().unwrap().join(reference);
    load_json::<BackendFile>(&path).unwrap().to_backend(TAU).unwrap()
}

#[test]
fn every_shipped_action_round_trips() {
    for path in files("actions") {
        let af: ActionFile = load_json(&path).unwrap();
        let act = af.to_action(&backend(&path, af.backend_ref.as_deref().unwrap())).unwrap();
        assert!(act.validate(TAU).unwrap().passed(), "{path:?}");
        let (cert, _) = roundtrip_check(&act, TAU).unwrap();
        assert!(cert.checks.passed(), "{path:?}: {:?}", cert.checks.failures());
    }
}

#[test]
fn every_shipped_cocycle_deforms_its_action() {
    for path in files("cocycles") {
        let cf: CocycleFile = load_json(&path).unwrap();
        let be = backend(&path, cf.backend_ref.as_deref().unwrap());
        let om = cf.to_cocycle(&be).unwrap();
        let apath = dir("actions").join(path.file_name().unwrap());
        let af: ActionFile = load_json(&apath).unwrap();
        let act = af.to_action(&be).unwrap();
        let rep = cross_test(&act, &om, TAU).unwrap();
        assert!(rep.passed(), "{path:?}: {:?}", rep.failures());
    }
}

#[test]
fn malformed_files_report_their_location() {
    let tmp = std::env::temp_dir().join(format!("cqgd-malformed-{}.json", std::process::id()));
    std::fs::write(&tmp, "{\n  \"kind\": \"group\",\n  \"tensor\": [[[1.0, 0.0]],\n").unwrap();
    let err = load_json::<CocycleFile>(&tmp).unwrap_err().to_string();
    std::fs::remove_file(&tmp).ok();
    assert!(err.contains("line 4"), "{err}");
}
