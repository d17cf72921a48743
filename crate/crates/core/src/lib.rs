//! Receiver-side GNSS spoofing detection from carrier-to-noise (C/N0)
//! trends across antenna bank orientations.
//!
//! A receiver logs NAV-SAT observations while its antenna sits banked left,
//! level and banked right. Genuine satellites occupy distinct sky directions,
//! so each one's mean C/N0 rises or falls monotonically as the antenna rolls
//! toward or away from it. Spoofed signals share a single emitter and lose
//! that structure.
//!
//! - [`ingest`]: NAV-SAT CSV logs and scenario manifests
//! - [`geometry`]: direction vectors and antenna boresights
//! - [`aggregate`]: per-PRN means, spreads and observed trends
//! - [`detect`]: rule-based and pattern-based detectors, JSON reports
//! - [`simulate`]: synthetic bundles with ground truth
//! - [`render`]: polar sky and trend-line SVGs
//! - [`cli`]: the `skyvane` command
//!
//! ```
//! use skyvane::detect::{run_pattern_based, Classification, DetectOptions};
//! use skyvane::ingest::Condition;
//! use skyvane::simulate::SimulationConfig;
//!
//! let cfg = SimulationConfig::from_seed(7);
//! let bundle = cfg.simulate().unwrap();
//! let report = run_pattern_based(&bundle, Condition::Spoofed, &cfg.antenna, DetectOptions::default()).unwrap();
//! assert_eq!(report.classification, Classification::Spoofed);
//! ```

pub mod aggregate;
pub mod cli;
pub mod detect;
mod error;
pub mod geometry;
pub mod ingest;
mod kv;
pub mod render;
pub mod simulate;

pub use error::{Error, Result};
