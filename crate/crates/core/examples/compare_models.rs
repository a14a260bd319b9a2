//! Ranks T-IPLM, ITU-R and log-distance by MSE against a drive-test log.
//! Without arguments a synthetic busy-office log is used.
//!
//! cargo run --example compare_models -- [plan.json data.csv]

use tiplm::calibrate;
use tiplm::geometry::{FloorPlan, Point3};
use tiplm::ingest::{self, MeasurementSet, DEFAULT_BIN_WIDTH_M};
use tiplm::models::{Channel, LinkBudget, ModelParams, PathLossModel, Scenario};
use tiplm::synth::{self, SynthConfig};

fn main() -> tiplm::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (plan, set) = match args.as_slice() {
        [plan, data] => (
            FloorPlan::load(plan)?,
            MeasurementSet::load(data, LinkBudget::default())?,
        ),
        _ => {
            let plan = FloorPlan::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/office.json"))?;
            let mut cfg =
                SynthConfig::new(plan.clone(), Point3::new(12.0, 11.5, 0), Channel::new(1)?);
            cfg.n_locations = 500;
            cfg.samples_per_location = 1;
            cfg.seed = 42;
            (plan, synth::generate(&cfg)?)
        }
    };
    let channel = set.records[0].channel;
    let set = set.for_channel(channel);
    let points = ingest::aggregate(&set, &plan, DEFAULT_BIN_WIDTH_M)?;

    let models = PathLossModel::standard_set(&ModelParams::default(), Scenario::BusyOffice);
    let report = calibrate::compare_models(&points, channel, &models)?;
    print!("{report}");
    println!("winner: {}", report.winner);
    Ok(())
}
