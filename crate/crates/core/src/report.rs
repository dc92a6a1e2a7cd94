//! Structured residual reports shared by validators and certificates.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
    pub skipped: bool,
    /// Where the largest residual occurred, if meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(tolerance: f64) -> Report {
        Report { tolerance, checks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, acc: Worst) {
        self.checks.push(Check {
            name: name.into(),
            residual: acc.residual,
            passed: acc.residual <= self.tolerance,
            skipped: false,
            worst: acc.at,
            note: None,
        });
    }

    /// A check that holds when `value` is strictly above `threshold`.
    pub fn push_lower_bound(&mut self, name: &str, value: f64, threshold: f64, note: &str) {
        self.checks.push(Check {
            name: name.into(),
            residual: value,
            passed: value > threshold,
            skipped: false,
            worst: None,
            note: Some(note.into()),
        });
    }

    pub fn push_flag(&mut self, name: &str, ok: bool, note: &str) {
        self.checks.push(Check {
            name: name.into(),
            residual: if ok { 0.0 } else { f64::INFINITY },
            passed: ok,
            skipped: false,
            worst: None,
            note: Some(note.into()),
        });
    }

    pub fn skip(&mut self, name: &str, note: &str) {
        self.checks.push(Check {
            name: name.into(),
            residual: 0.0,
            passed: true,
            skipped: true,
            worst: None,
            note: Some(note.into()),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().filter(|c| !c.skipped && c.note.is_none()).map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }
}

/// Running maximum of residuals with the location of the worst one.
#[derive(Clone, Debug, Default)]
pub struct Worst {
    pub residual: f64,
    pub at: Option<String>,
}

impl Worst {
    pub fn new() -> Worst {
        Worst::default()
    }

    pub fn update(&mut self, residual: f64, at: impl FnOnce() -> String) {
        if residual > self.residual || residual.is_nan() {
            self.residual = if residual.is_nan() { f64::INFINITY } else { residual };
            self.at = Some(at());
        }
    }
}
