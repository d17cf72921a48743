//! How a wrong heading affects the pattern detector on a noise-free real
//! sky. Errors near 180 degrees swap the bank boresights and every
//! prediction flips.

use skyvane::detect::{run_pattern_based, DetectOptions};
use skyvane::ingest::Condition;
use skyvane::simulate::SimulationConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = SimulationConfig::default();
    cfg.gain.noise_sigma_db = 0.0;
    let bundle = cfg.simulate()?;

    println!("error(deg)  classification  violations/checked");
    for error in (0..=180).step_by(15) {
        let mut antenna = cfg.antenna;
        antenna.heading_deg += f64::from(error);
        let report = run_pattern_based(&bundle, Condition::RealSky, &antenna, DetectOptions::default())?;
        println!(
            "{error:>10}  {:<14}  {}/{}",
            report.classification,
            report.violations.len(),
            report.checked_prns
        );
    }
    Ok(())
}
