//! Rule-based detection with fixed expectation lists.
//!
//! The shipped reference lists were written for one particular sky, so on a
//! different sky most of their PRNs are absent and the report carries a
//! low-evidence warning. Lists predicted for this sky and then frozen give a
//! usable check.

use skyvane::detect::{predict_trends, run_rule_based, DetectOptions, TrendExpectation};
use skyvane::ingest::{Condition, Orientation};
use skyvane::simulate::SimulationConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SimulationConfig::default();
    let bundle = cfg.simulate()?;

    let reference = TrendExpectation::reference();
    let flat = bundle.require(Condition::RealSky, Orientation::Flat)?;
    let predicted = predict_trends(flat, &cfg.antenna)?;
    let frozen = TrendExpectation::hard_coded(predicted.increasing().clone(), predicted.decreasing().clone())?;

    for (name, expect) in [("reference", &reference), ("frozen", &frozen)] {
        println!("{name}: increasing {:?} decreasing {:?}", expect.increasing(), expect.decreasing());
        for condition in Condition::ALL {
            let report = run_rule_based(&bundle, condition, expect, DetectOptions::default())?;
            println!(
                "  {condition:<9} -> {:<11} checked {:>2} skipped {:>2} violations {:>2} warnings {:?}",
                report.classification,
                report.checked_prns,
                report.skipped_prns,
                report.violations.len(),
                report.warnings
            );
        }
    }
    Ok(())
}
