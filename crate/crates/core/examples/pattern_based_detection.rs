//! Pattern-based detection: expectation lists come from satellite positions
//! in the real-sky flat log and the antenna geometry. Prints the spoofed
//! report as JSON.

use skyvane::detect::{run_pattern_based, DetectOptions};
use skyvane::ingest::Condition;
use skyvane::simulate::SimulationConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(42);
    let cfg = SimulationConfig::from_seed(seed);
    let bundle = cfg.simulate()?;

    let real = run_pattern_based(&bundle, Condition::RealSky, &cfg.antenna, DetectOptions::default())?;
    let spoofed = run_pattern_based(&bundle, Condition::Spoofed, &cfg.antenna, DetectOptions::default())?;

    eprintln!(
        "real sky: {} ({} of {} checked PRNs violate)",
        real.classification,
        real.violations.len(),
        real.checked_prns
    );
    eprintln!(
        "spoofed:  {} ({} of {} checked PRNs violate)",
        spoofed.classification,
        spoofed.violations.len(),
        spoofed.checked_prns
    );
    print!("{}", spoofed.to_json());
    Ok(())
}
