use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cqg_duality::deform::{check_cocycle, cross_test, deform_action, u_element};
use cqg_duality::equivariant::{fullness_check, module_functor, spectral_to_module_maps, EquivariantModule};
use cqg_duality::io::{
    load_json, mat_to_json, write_json, ActionFile, BackendFile, CocycleFile, FunctorFile, GradedFile,
};
use cqg_duality::qcat::{Backend, TAU};
use cqg_duality::reconstruct::build;
use cqg_duality::report::{Report, Worst, SCHEMA_VERSION};
use cqg_duality::spectral::{roundtrip_check, spectral_functor};
use cqg_duality::wutf::check_natural_iso;
use cqg_duality::{Error, Result};

mod export;

/// Checks and reconstructions for quantum group actions and their tensor functors.
#[derive(Parser)]
#[command(name = "cqgd", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Backend file; defaults to the input's `backend_ref`.
    #[arg(long)]
    backend: Option<PathBuf>,
    /// Input file. `deform` takes an action and then a cocycle.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Where to write the JSON report; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Seed for randomized spanning-set checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check every axiom of a functor file.
    Validate(Common),
    /// Check a graded bundle file.
    ValidateGraded(Common),
    /// Build the algebra of a functor and verify its invariants.
    Build(Common),
    /// Compute the spectral functor of an action.
    Spectral(Common),
    /// Certify that an action is recovered from its spectral functor.
    Roundtrip(Common),
    /// Functor of the action's module (or of the algebra itself).
    ModuleFunctor(Common),
    /// Decide whether the action's module is full.
    Fullness(Common),
    /// Check a cocycle and its u-element.
    CocycleCheck(Common),
    /// Deform an action by a cocycle.
    Deform {
        #[command(flatten)]
        common: Common,
        /// Also compare with the deformed functor.
        #[arg(long)]
        cross_test: bool,
    },
    /// Write the fixture corpus into a directory.
    ExportFixtures { dir: PathBuf },
}

struct Outcome {
    passed: bool,
    result: Value,
    reports: Vec<(String, Report)>,
}

impl Outcome {
    fn new(result: Value, reports: Vec<(&str, Report)>) -> Outcome {
        let reports: Vec<(String, Report)> = reports.into_iter().map(|(n, r)| (n.to_string(), r)).collect();
        Outcome { passed: reports.iter().all(|(_, r)| r.passed()), result, reports }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, cross) = match cli.verb {
        Verb::ExportFixtures { dir } => {
            return match export::export(&dir) {
                Ok(n) => {
                    eprintln!("wrote {n} files to {}", dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Verb::Validate(c) => ("validate", c, false),
        Verb::ValidateGraded(c) => ("validate-graded", c, false),
        Verb::Build(c) => ("build", c, false),
        Verb::Spectral(c) => ("spectral", c, false),
        Verb::Roundtrip(c) => ("roundtrip", c, false),
        Verb::ModuleFunctor(c) => ("module-functor", c, false),
        Verb::Fullness(c) => ("fullness", c, false),
        Verb::CocycleCheck(c) => ("cocycle-check", c, false),
        Verb::Deform { common, cross_test } => ("deform", common, cross_test),
    };
    let tol = common.tolerance.unwrap_or(TAU);
    let outcome = if !(tol.is_finite() && tol > 0.0) {
        Err(Error::Config(format!("tolerance must be positive, got {tol}")))
    } else {
        run(name, &common, tol, cross)
    };
    let mut envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "verb": name,
        "tolerance": tol,
        "seed": common.seed,
    });
    let code = match &outcome {
        Ok(o) => {
            envelope["passed"] = json!(o.passed);
            envelope["result"] = o.result.clone();
            for (label, r) in &o.reports {
                summarize(label, r);
            }
            u8::from(!o.passed)
        }
        Err(e) => {
            let code = exit_code(e);
            envelope["passed"] = json!(false);
            envelope["error"] = json!({ "kind": error_kind(e), "message": e.to_string() });
            eprintln!("error: {e}");
            code
        }
    };
    envelope["status"] = json!(code);
    let written = match &common.report {
        Some(path) => write_json(path, &envelope),
        None => {
            // A closed pipe (e.g. `| head`) is not worth a panic.
            let text = serde_json::to_string_pretty(&envelope).expect("report serializes");
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("{name}: {}", if code == 0 { "PASS" } else { "FAIL" });
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension",
        Error::Config(_) => "config",
        Error::Table(_) => "table",
        Error::Incomplete(_) => "incomplete",
        Error::Contract(_) => "contract",
        Error::Parse(_) => "parse",
        Error::Validation(_) => "validation",
    }
}

fn summarize(label: &str, r: &Report) {
    let run = r.checks.iter().filter(|c| !c.skipped).count();
    eprintln!("  {label}: {run} checks, max residual {:.3e}", r.max_residual());
    for c in r.failures() {
        let at = c.worst.as_deref().map(|w| format!(" at {w}")).unwrap_or_default();
        eprintln!("    FAILED {} residual {:.3e}{at}", c.name, c.residual);
    }
}

fn input(common: &Common, k: usize, what: &str) -> Result<PathBuf> {
    common.input.get(k).cloned().ok_or_else(|| Error::Config(format!("missing --input for the {what}")))
}

fn backend_for(common: &Common, reference: Option<&str>, from: &Path, tol: f64) -> Result<Backend> {
    let path = match (&common.backend, reference) {
        (Some(p), _) => p.clone(),
        (None, Some(r)) => from.parent().unwrap_or(Path::new(".")).join(r),
        (None, None) => return Err(Error::Config("no backend: pass --backend".into())),
    };
    load_json::<BackendFile>(&path)?.to_backend(tol)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn run(verb: &str, common: &Common, tol: f64, cross: bool) -> Result<Outcome> {
    match verb {
        "validate" => {
            let path = input(common, 0, "functor")?;
            let ff: FunctorFile = load_json(&path)?;
            let be = backend_for(common, ff.backend_ref.as_deref(), &path, tol)?;
            let f = ff.to_functor(&be)?;
            let checks = f.validate(tol)?;
            Ok(Outcome::new(json!({ "checks": to_value(&checks) }), vec![("functor", checks)]))
        }
        "validate-graded" => {
            let path = input(common, 0, "graded bundle")?;
            let bundle = load_json::<GradedFile>(&path)?.to_bundle()?;
            let checks = bundle.validate(tol)?;
            let result = json!({ "checks": to_value(&checks), "saturated": bundle.all_surjective() });
            Ok(Outcome::new(result, vec![("bundle", checks)]))
        }
        "build" => {
            let path = input(common, 0, "functor")?;
            let ff: FunctorFile = load_json(&path)?;
            let be = backend_for(common, ff.backend_ref.as_deref(), &path, tol)?;
            let bf = build(&ff.to_functor(&be)?, tol)?;
            let br = bf.verify(tol, common.seed, 100);
            let result = json!({
                "algebra_dim": br.algebra_dim,
                "component_dims": to_value(&br.component_dims),
                "checks": to_value(&br.checks),
                "multiplication_table": to_value(&bf.multiplication_table()),
            });
            Ok(Outcome::new(result, vec![("algebra", br.checks)]))
        }
        "spectral" | "roundtrip" | "module-functor" | "fullness" => {
            let path = input(common, 0, "action")?;
            let af: ActionFile = load_json(&path)?;
            let be = backend_for(common, af.backend_ref.as_deref(), &path, tol)?;
            let act = af.to_action(&be)?;
            let action_checks = act.validate(tol)?;
            if !action_checks.passed() {
                let result = json!({ "action": to_value(&action_checks) });
                return Ok(Outcome::new(result, vec![("action", action_checks)]));
            }
            let module = af.module_spec(&be, act.dim())?;
            match verb {
                "spectral" => spectral(act, action_checks, tol),
                "roundtrip" => {
                    let (cert, _) = roundtrip_check(&act, tol)?;
                    let result = json!({ "action": to_value(&action_checks), "certificate": to_value(&cert) });
                    Ok(Outcome::new(result, vec![("action", action_checks), ("certificate", cert.checks)]))
                }
                "module-functor" => {
                    let sf = match module {
                        None => Some(spectral_functor(&act)?),
                        Some(_) => None,
                    };
                    let m = match module {
                        Some((rep, q)) => EquivariantModule::new(act, rep, &q, tol)?,
                        None => EquivariantModule::regular(act, tol)?,
                    };
                    let f = module_functor(&m)?;
                    let mut checks = f.validate(tol)?;
                    if let Some(sf) = sf {
                        let maps = spectral_to_module_maps(&sf, &m, &f);
                        checks.extend("spectral_iso_", check_natural_iso(&sf.functor, &f, &maps, tol));
                    }
                    let cat = &f.category;
                    let dims: Vec<(String, usize)> =
                        (0..cat.n_irreps()).map(|a| (cat.label(a).to_string(), f.dim(a))).collect();
                    let result = json!({
                        "module_dim": m.dim(),
                        "base_blocks": to_value(&f.base.blocks),
                        "dims": to_value(&dims),
                        "checks": to_value(&checks),
                    });
                    Ok(Outcome::new(result, vec![("action", action_checks), ("module functor", checks)]))
                }
                _ => {
                    let m = match module {
                        Some((rep, q)) => EquivariantModule::new(act, rep, &q, tol)?,
                        None => {
                            let rep = act.backend.trivial_rep(1);
                            EquivariantModule::free(act, rep, tol)?
                        }
                    };
                    let r = fullness_check(&m, tol);
                    let mut checks = Report::new(tol);
                    checks.push_flag("full", r.full, &format!("rank {} of {}", r.rank, r.dim));
                    if r.full {
                        checks.push_lower_bound("c_positive", r.c, 0.0, "");
                        let mut iso = Worst::new();
                        iso.update(r.isometry_residual, String::new);
                        checks.push("isometry", iso);
                    }
                    let result = json!({ "fullness": to_value(&r), "checks": to_value(&checks) });
                    Ok(Outcome::new(result, vec![("action", action_checks), ("fullness", checks)]))
                }
            }
        }
        "cocycle-check" => {
            let path = input(common, 0, "cocycle")?;
            let cf: CocycleFile = load_json(&path)?;
            let be = backend_for(common, cf.backend_ref.as_deref(), &path, tol)?;
            let om = cf.to_cocycle(&be)?;
            let checks = check_cocycle(&be, &om, tol)?;
            let (u, ucheck) = u_element(&be, &om, tol)?;
            let u_irreps: Vec<(String, Value)> = (0..be.n_irreps())
                .map(|a| (be.irreps[a].label.clone(), to_value(&mat_to_json(&u.on_irrep(&be, a)))))
                .collect();
            let result = json!({
                "checks": to_value(&checks),
                "u_element": to_value(&ucheck),
                "u": to_value(&u_irreps),
            });
            Ok(Outcome::new(result, vec![("cocycle", checks), ("u-element", ucheck)]))
        }
        "deform" => {
            let apath = input(common, 0, "action")?;
            let cpath = input(common, 1, "cocycle")?;
            let af: ActionFile = load_json(&apath)?;
            let cf: CocycleFile = load_json(&cpath)?;
            let be = backend_for(common, af.backend_ref.as_deref(), &apath, tol)?;
            let act = af.to_action(&be)?;
            let om = cf.to_cocycle(&be)?;
            let cocycle = check_cocycle(&be, &om, tol)?;
            if !cocycle.passed() {
                let result = json!({ "cocycle": to_value(&cocycle) });
                return Ok(Outcome::new(result, vec![("cocycle", cocycle)]));
            }
            let (deformed, checks) = deform_action(&act, &om, tol)?;
            let mut result = json!({
                "cocycle": to_value(&cocycle),
                "deformation": to_value(&checks),
                "deformed_dim": deformed.dim(),
                "deformed_blocks": to_value(&deformed.algebra.block_sizes(common.seed)),
            });
            let mut reports = vec![("cocycle", cocycle), ("deformation", checks)];
            if cross {
                let ct = cross_test(&act, &om, tol)?;
                result["cross_test"] = to_value(&ct);
                reports.push(("cross-test", ct));
            }
            Ok(Outcome::new(result, reports))
        }
        _ => unreachable!("verb list is closed"),
    }
}

fn spectral(act: cqg_duality::spectral::ActionData, action_checks: Report, tol: f64) -> Result<Outcome> {
    let sf = spectral_functor(&act)?;
    let mut checks = sf.functor.validate(tol)?;
    let mut star = Worst::new();
    star.update(sf.s_x_star_residual(&act, tol)?, String::new);
    checks.push("spectral_star", star);
    let (dims, total) = sf.peter_weyl();
    checks.push_flag("peter_weyl_total", total == act.dim(), &format!("{total} against dim {}", act.dim()));
    let cat = &sf.functor.category;
    let dims: Vec<(String, usize)> = dims.iter().enumerate().map(|(a, &d)| (cat.label(a).to_string(), d)).collect();
    let result = json!({
        "action": to_value(&action_checks),
        "checks": to_value(&checks),
        "peter_weyl": { "components": to_value(&dims), "total": total },
        "functor": to_value(&FunctorFile::from_functor(&sf.functor, None)),
    });
    Ok(Outcome::new(result, vec![("action", action_checks), ("spectral functor", checks)]))
}
