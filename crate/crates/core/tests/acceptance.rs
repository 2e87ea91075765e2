//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::ExitCode;
use std::time::Instant;

use unitary_measure::cli::{scenario_params, Check, Report};

struct Criterion {
    id: u32,
    title: &'static str,
    scenario: &'static str,
    /// Selects the scenario checks belonging to this criterion.
    selects: fn(&str) -> bool,
}

fn everything(_: &str) -> bool {
    true
}

const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        title: "series identity",
        scenario: "zerodim-series",
        selects: |n| !n.starts_with("pairing"),
    },
    Criterion {
        id: 2,
        title: "pairing reorganization equivalence",
        scenario: "zerodim-series",
        selects: |n| n.starts_with("pairing"),
    },
    Criterion { id: 3, title: "Borel consistency", scenario: "zerodim-borel", selects: everything },
    Criterion { id: 4, title: "spectral cancellation", scenario: "spectral-probe", selects: everything },
    Criterion { id: 5, title: "proper-time route", scenario: "proper-time", selects: everything },
    Criterion { id: 6, title: "unitarity identity", scenario: "unitarity", selects: everything },
    Criterion { id: 7, title: "virtual work and quadratic remainders", scenario: "action-decomposition", selects: everything },
    Criterion { id: 8, title: "fluctuation kernel", scenario: "green-kernel", selects: everything },
    Criterion { id: 9, title: "canonical transformation", scenario: "action-angle", selects: everything },
    Criterion {
        id: 10,
        title: "retarded kernel",
        scenario: "response-equivalence",
        selects: |n| !n.contains("response"),
    },
    Criterion {
        id: 11,
        title: "response equivalence",
        scenario: "response-equivalence",
        selects: |n| n.contains("response"),
    },
    Criterion { id: 12, title: "polar transformation", scenario: "polar-equivalence", selects: everything },
];

fn run_scenario(name: &str) -> Result<Report, String> {
    let (scenario, params) = scenario_params(name, "").map_err(|e| e.to_string())?;
    let mut report = Report::new(1.0);
    scenario.run(&params, 7, &mut report).map_err(|e| e.to_string())?;
    Ok(report)
}

fn main() -> ExitCode {
    let mut cache: Vec<(&str, Result<Report, String>, f64)> = Vec::new();
    let mut failures = 0;
    for c in &CRITERIA {
        if !cache.iter().any(|(n, _, _)| *n == c.scenario) {
            let start = Instant::now();
            let report = run_scenario(c.scenario);
            cache.push((c.scenario, report, start.elapsed().as_secs_f64()));
        }
        let (_, report, seconds) = cache.iter().find(|(n, _, _)| *n == c.scenario).unwrap();
        match report {
            Ok(report) => {
                let checks: Vec<&Check> = report.checks.iter().filter(|k| (c.selects)(&k.name)).collect();
                let ok = !checks.is_empty() && checks.iter().all(|k| k.passed());
                if !ok {
                    failures += 1;
                }
                println!("{} criterion {:>2} {} ({}, {seconds:.2}s)", if ok { "PASS" } else { "FAIL" }, c.id, c.title, c.scenario);
                for k in checks.iter().filter(|k| !k.passed()) {
                    println!("       {}: measured {:.6e} > tolerance {:.6e}", k.name, k.measured, k.tolerance);
                }
            }
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {:>2} {} ({}): {e}", c.id, c.title, c.scenario);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
