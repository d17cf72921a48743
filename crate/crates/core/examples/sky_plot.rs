//! Renders the polar sky plot and the trend-line plot of a simulated bundle.
//!
//! ```text
//! cargo run --example sky_plot [out_dir]
//! ```

use std::path::PathBuf;

use skyvane::render::{render_bundle, PlotKind, RenderSpec};
use skyvane::simulate::SimulationConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "target/skyvane-plots".into()).into();
    std::fs::create_dir_all(&out)?;
    let bundle = SimulationConfig::default().simulate()?;

    for (kind, name) in [(PlotKind::PolarSky, "sky.svg"), (PlotKind::TrendLines, "trends.svg")] {
        let svg = render_bundle(&bundle, &RenderSpec::new(kind))?;
        let path = out.join(name);
        std::fs::write(&path, &svg)?;
        println!("{} ({} bytes)", path.display(), svg.len());
    }
    Ok(())
}
