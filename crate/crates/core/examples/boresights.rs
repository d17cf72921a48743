//! Prints the three boresight vectors for both antenna models and the
//! predicted trend of a few sky directions.

use skyvane::detect::predict_label;
use skyvane::geometry::{boresights, BoresightModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let heading = 0.0;
    for model in [BoresightModel::AzimuthSweep, BoresightModel::RollTilt] {
        let set = boresights(heading, 45.0, model)?;
        println!("{model} (heading {heading}, bank 45)");
        for (name, v) in [("left", set.left), ("flat", set.flat), ("right", set.right)] {
            let [x, y, z] = v.components();
            println!("  {name:<5} E {x:>7.4}  N {y:>7.4}  U {z:>7.4}");
        }
        for (az, el) in [(90.0, 30.0), (270.0, 30.0), (0.0, 60.0), (135.0, 10.0)] {
            let label = predict_label(&set, az, el)?;
            println!("  az {az:>5} el {el:>4} -> {label:?}");
        }
    }
    Ok(())
}
