//! Parses a NAV-SAT log strictly and leniently and prints per-PRN means.
//!
//! ```text
//! cargo run --example ingest_navsat [path/to/log.csv]
//! ```

use skyvane::aggregate::{avg_cno, SampleFilter};
use skyvane::ingest::{parse_navsat_bytes, parse_navsat_csv_with, IngestOptions, CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = match std::env::args().nth(1) {
        Some(path) => parse_navsat_csv_with(path, IngestOptions::lenient())?,
        None => {
            // a row with azimuth 360 and a duplicate row
            let text = format!(
                "{CSV_HEADER}\n\
                 2025-01-15T12:00:00,5,41.2,288.0,36.5,4,1\n\
                 2025-01-15T12:00:00,24,55.0,97.3,42.0,4,1\n\
                 2025-01-15T12:00:01,5,41.2,360.0,36.9,4,1\n\
                 2025-01-15T12:00:01,24,55.0,97.3,41.6,4,0\n\
                 2025-01-15T12:00:01,24,55.0,97.3,41.6,4,0\n"
            );
            if let Err(e) = parse_navsat_bytes(text.as_bytes(), IngestOptions::default()) {
                println!("strict: {e}");
            }
            parse_navsat_bytes(text.as_bytes(), IngestOptions::lenient())?
        }
    };
    println!(
        "lenient: {} rows kept, {} skipped, {} below the horizon",
        log.observations.len(),
        log.skipped_rows,
        log.negative_elevation_rows
    );

    let all = avg_cno(&log.observations, SampleFilter::All)?;
    let used = avg_cno(&log.observations, SampleFilter::UsedOnly).unwrap_or_default();
    println!("svId  mean(all)  mean(used)");
    for (sv, mean) in &all {
        let u = used.get(sv).map_or("-".to_string(), |m| format!("{m:.3}"));
        println!("{sv:>4}  {mean:>9.3}  {u:>10}");
    }
    Ok(())
}
