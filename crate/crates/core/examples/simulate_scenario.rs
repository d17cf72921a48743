//! Simulates a six-log scenario bundle and writes it to disk.
//!
//! ```text
//! cargo run --example simulate_scenario [out_dir] [seed]
//! ```

use skyvane::simulate::{write_bundle, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "target/skyvane-demo".into());
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);

    let cfg = SimulationConfig::from_seed(seed);
    let sky = cfg.sky()?;
    println!("{} satellites, {} epochs every {} s", sky.satellites().len(), cfg.epoch_count, cfg.epoch_interval_s);
    for sat in sky.satellites() {
        println!("  svId {:>3}  az {:>7.3}  el {:>6.3}", sat.sv_id, sat.azim_deg, sat.elev_deg);
    }

    let manifest = write_bundle(&cfg.simulate()?, &out)?;
    println!("manifest: {}", manifest.display());
    print!("{}", std::fs::read_to_string(&manifest)?);
    Ok(())
}
