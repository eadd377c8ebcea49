//! Acceptance suite: one PASS/FAIL line per criterion, then the suite
//! runtime and two behavioural checks of the runner itself. Exits non-zero
//! when anything fails.

use std::process::ExitCode;
use std::time::Instant;

use anyonic::dynamics::{propagator_closed, trace_closed};
use anyonic::verification::{oracle_equivalence, run_checks, ClosedForms, SUITE_BUDGET};
use anyonic::{AnyonParams, Result};

fn perturbed_trace(p: &AnyonParams, t: f64) -> Result<f64> {
    trace_closed(p, t).map(|v| v * (1.0 + 1e-7))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let outcomes = run_checks(None).expect("full suite runs");
    let elapsed = start.elapsed();
    let mut failed = 0;
    for o in &outcomes {
        println!("{}", o.line());
        failed += usize::from(!o.passed);
    }

    let within_budget = elapsed <= SUITE_BUDGET;
    println!(
        "{}  suite runtime {:.2} s (budget {} s)",
        if within_budget { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        SUITE_BUDGET.as_secs()
    );
    failed += usize::from(!within_budget);

    let tampered = ClosedForms { trace: perturbed_trace, propagator: propagator_closed };
    let caught = !oracle_equivalence(tampered, 200).passed;
    println!("{}  perturbed closed-form trace is rejected", if caught { "PASS" } else { "FAIL" });
    failed += usize::from(!caught);

    let only = run_checks(Some("oracle")).expect("known group");
    let filtered = !only.is_empty() && only.iter().all(|o| o.group == "oracle") && only.len() < outcomes.len();
    println!("{}  group filter runs only the oracle checks ({} run)", if filtered { "PASS" } else { "FAIL" }, only.len());
    failed += usize::from(!filtered);

    println!("acceptance: {} checks, {failed} failed", outcomes.len() + 3);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
