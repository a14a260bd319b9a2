//! Cleansing residuals of a noisy synthetic log: mean, standard deviation
//! and a text histogram.
//!
//! cargo run --example error_histogram -- [seed]

use tiplm::calibrate::{error_stats, DEFAULT_HISTOGRAM_BIN_DB};
use tiplm::geometry::{FloorPlan, Point3};
use tiplm::ingest::{cleansing_residuals, DEFAULT_BIN_WIDTH_M};
use tiplm::models::Channel;
use tiplm::synth::{generate, SynthConfig};

fn main() -> tiplm::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map_or(3, |s| s.parse().expect("seed"));
    let plan = FloorPlan::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/office.json"))?;
    let mut cfg = SynthConfig::new(plan.clone(), Point3::new(12.0, 11.5, 0), Channel::new(11)?);
    cfg.seed = seed;
    cfg.n_locations = 200;
    cfg.samples_per_location = 50;

    let set = generate(&cfg)?;
    let residuals = cleansing_residuals(&set, &plan, DEFAULT_BIN_WIDTH_M)?;
    let stats = error_stats(&residuals, DEFAULT_HISTOGRAM_BIN_DB)?;
    println!(
        "{} residuals: mean {:.3} dB, std {:.3} dB",
        stats.n, stats.mean, stats.std_dev
    );
    let peak = stats
        .histogram
        .iter()
        .map(|b| b.count)
        .max()
        .unwrap_or(1)
        .max(1);
    for bin in &stats.histogram {
        let bar = "#".repeat((bin.count * 60).div_ceil(peak) as usize);
        println!("{:6.1} .. {:6.1} {:6} {bar}", bin.low, bin.high, bin.count);
    }
    Ok(())
}
