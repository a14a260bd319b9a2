//! Generates a seeded synthetic drive test, cleanses it and fits N_T
//! overall and per obstacle count, then gamma for the log-distance model.
//!
//! cargo run --example synth_and_fit -- [seed] [noise_std_db]

use tiplm::calibrate::{self, Weighting};
use tiplm::geometry::{FloorPlan, Point3};
use tiplm::ingest::{self, DEFAULT_BIN_WIDTH_M};
use tiplm::models::{Channel, ModelParams};
use tiplm::synth::{self, SynthConfig};

fn main() -> tiplm::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let noise_std: f64 = args
        .next()
        .map_or(3.58, |s| s.parse().expect("noise std in dB"));

    let plan = FloorPlan::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/office.json"))?;
    let channel = Channel::new(1)?;
    let mut cfg = SynthConfig::new(plan.clone(), Point3::new(12.0, 11.5, 0), channel);
    cfg.seed = seed;
    cfg.noise_std = noise_std;
    cfg.n_locations = 300;

    let set = synth::generate(&cfg)?;
    let points = ingest::aggregate(&set, &plan, DEFAULT_BIN_WIDTH_M)?;
    println!(
        "{} samples -> {} aggregated points",
        set.len(),
        points.len()
    );

    let f = channel.frequency_mhz();
    let params = ModelParams::default();
    let overall = calibrate::fit_nt(&points, f, &params.tiplm)?;
    println!(
        "{} = {:.3} (rms {:.3} dB)",
        overall.parameter_name, overall.estimate, overall.residual_rms
    );
    for fit in
        calibrate::fit_nt_by_obstacles(&points, f, &params.tiplm, Weighting::SampleCount)?.values()
    {
        println!(
            "{} = {:.3} over {} points",
            fit.parameter_name, fit.estimate, fit.sample_count
        );
    }
    let gamma = calibrate::fit_gamma(&points, f, params.log_distance.d0_m)?;
    println!(
        "{} = {:.3} (rms {:.3} dB)",
        gamma.parameter_name, gamma.estimate, gamma.residual_rms
    );
    Ok(())
}
