//! Compares per-PRN C/N0 spread across orientations for real and spoofed
//! conditions over many simulated skies.

use skyvane::aggregate::{median, summarize, SummaryOptions};
use skyvane::ingest::Condition;
use skyvane::simulate::SimulationConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(50);
    let mut medians = [Vec::new(), Vec::new()];
    for seed in 0..runs {
        let bundle = SimulationConfig::from_seed(seed).simulate()?;
        for (i, condition) in Condition::ALL.into_iter().enumerate() {
            let spreads: Vec<f64> = summarize(&bundle, condition, SummaryOptions::default())?
                .iter()
                .filter_map(|s| s.spread_db)
                .collect();
            medians[i].extend(median(&spreads));
        }
    }
    for (condition, values) in Condition::ALL.iter().zip(&medians) {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{condition:<9} median spread over {runs} skies: {:.2} dB (range {lo:.2} to {hi:.2})",
            median(values).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
