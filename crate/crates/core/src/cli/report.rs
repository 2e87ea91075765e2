use std::fmt::Write as _;

/// One checked invariant: passes when `measured ≤ tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

/// Checks and output files of a scenario run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub files: Vec<(String, String)>,
    tol_scale: f64,
}

impl Report {
    pub fn new(tol_scale: f64) -> Self {
        Self { checks: Vec::new(), files: Vec::new(), tol_scale }
    }

    /// Records `measured ≤ tolerance · tol_scale`.
    pub fn check(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            measured,
            tolerance: tolerance * self.tol_scale,
        });
    }

    /// Records an exact condition (measured 0 on success, 1 on failure).
    pub fn require(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            measured: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
        });
    }

    pub fn file(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn summary(&self, header: &str) -> String {
        let mut s = format!("{header}\ncheck,measured,tolerance,status\n");
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{},{:.6e},{:.6e},{status}", c.name, c.measured, c.tolerance);
        }
        s
    }
}
