use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cqgd(args: &[&str], report: &Path) -> (i32, Value) {
    let out =
        Command::new(env!("CARGO_BIN_EXE_cqgd")).args(args).arg("--report").arg(report).output().expect("binary runs");
    let text = std::fs::read_to_string(report).expect("report is always written");
    (out.status.code().expect("exit code"), serde_json::from_str(&text).unwrap())
}

fn fx(rel: &str) -> String {
    fixtures().join(rel).to_string_lossy().into_owned()
}

#[test]
fn shipped_fixtures_are_current() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_cqgd")).arg("export-fixtures").arg(dir.path()).status().unwrap();
    assert!(status.success());
    for sub in ["backends", "actions", "functors", "graded", "cocycles"] {
        for entry in std::fs::read_dir(dir.path().join(sub)).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap();
            let shipped = std::fs::read(fixtures().join(sub).join(name)).unwrap_or_default();
            assert!(shipped == std::fs::read(&path).unwrap(), "{sub}/{name:?} is stale; rerun export-fixtures");
        }
    }
}

#[test]
fn validate_s3_spectral_functor() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = cqgd(&["validate", "--input", &fx("functors/s3_translation.json")], &dir.path().join("r.json"));
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
}

#[test]
fn roundtrip_z2_swap_emits_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = cqgd(&["roundtrip", "--input", &fx("actions/z2_swap.json")], &dir.path().join("r.json"));
    assert_eq!(code, 0, "{r}");
    let m = r["result"]["certificate"]["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 2);
}

#[test]
fn deform_cross_test_on_bicharacter() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "deform",
        "--cross-test",
        "--input",
        &fx("actions/z2x2_group_algebra.json"),
        "--input",
        &fx("cocycles/z2x2_group_algebra.json"),
    ];
    let (code, r) = cqgd(&args, &dir.path().join("r.json"));
    assert_eq!(code, 0, "{r}");
    assert!(r["result"]["cross_test"]["checks"].as_array().unwrap().len() > 3);
    assert_eq!(r["result"]["deformed_blocks"], serde_json::json!([2]));
}

#[test]
fn corner_module_is_not_full() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = cqgd(&["fullness", "--input", &fx("actions/z2_corner_module.json")], &dir.path().join("r.json"));
    assert_eq!(code, 1);
    assert_eq!(r["result"]["fullness"]["rank"], 1);
    let (code, r) =
        cqgd(&["fullness", "--input", &fx("actions/z2_swap_twisted_module.json")], &dir.path().join("r.json"));
    assert_eq!(code, 0, "{r}");
    assert!(r["result"]["fullness"]["c"].as_f64().unwrap() > 0.0);
}

#[test]
fn graded_bundle_validates() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = cqgd(&["validate-graded", "--input", &fx("graded/clock_shift.json")], &dir.path().join("r.json"));
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["saturated"], true);
}

#[test]
fn mutated_functor_fails_with_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fx("functors/z2_swap.json")).unwrap();
    let mut f: Value = serde_json::from_str(&text).unwrap();
    f["backend_ref"] = Value::String(fx("backends/z2.json"));
    let entries = f["phi"].as_array_mut().unwrap();
    let last = entries.last_mut().unwrap();
    last["tensor"][0][0][0] = serde_json::json!(last["tensor"][0][0][0].as_f64().unwrap() + 0.25);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    let (code, r) = cqgd(&["validate", "--input", path.to_str().unwrap()], &dir.path().join("r.json"));
    assert_eq!(code, 1);
    let failed: Vec<&Value> =
        r["result"]["checks"]["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failed.is_empty());
}

#[test]
fn input_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"kind\": \"dual\",\n  \"values\": [1,\n").unwrap();
    let report = dir.path().join("r.json");
    let (code, r) =
        cqgd(&["cocycle-check", "--backend", &fx("backends/z2_dual.json"), "--input", bad.to_str().unwrap()], &report);
    assert_eq!(code, 2);
    let msg = r["error"]["message"].as_str().unwrap();
    assert!(msg.contains("line") && msg.contains("column"), "{msg}");

    let (code, _) = cqgd(&["validate", "--tolerance", "0", "--input", &fx("functors/z2_swap.json")], &report);
    assert_eq!(code, 2);
    let (code, _) =
        cqgd(&["spectral", "--input", &fx("actions/z2_swap.json"), "--backend", &fx("backends/s3.json")], &report);
    assert_eq!(code, 2);
}

#[test]
fn missing_dual_cocycle_entries_default_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("om.json");
    std::fs::write(&path, r#"{"kind": "dual", "values": {"(1,1)": [-1.0, 0.0]}}"#).unwrap();
    let (code, r) = cqgd(
        &["cocycle-check", "--backend", &fx("backends/z2_dual.json"), "--input", path.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    assert_eq!(code, 0, "{r}");
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for verb in ["build", "validate"] {
        let args = [verb, "--seed", "7", "--input", &fx("functors/s3_translation.json")];
        assert_eq!(cqgd(&args, &a).0, 0);
        assert_eq!(cqgd(&args, &b).0, 0);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{verb}");
    }
}
