//! Writes a predicted-RSSI coverage map of the sample office as CSV and PGM.
//!
//! cargo run --example coverage_heatmap -- [out_dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use tiplm::coverage::coverage_grid;
use tiplm::geometry::{FloorPlan, Point3};
use tiplm::models::{Channel, LinkBudget, ModelParams, PathLossModel, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let plan = FloorPlan::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/office.json"))?;
    let ap = Point3::new(12.0, 11.5, 0);
    let model = PathLossModel::TIplm {
        params: ModelParams::default().tiplm,
        scenario: Scenario::BusyOffice,
    };

    for floor in 0..plan.floor_count() {
        let grid = coverage_grid(
            &plan,
            &ap,
            &model,
            &LinkBudget::default(),
            Channel::new(1)?,
            floor,
            0.25,
        )?;
        let csv = out_dir.join(format!("coverage_floor{floor}.csv"));
        let pgm = out_dir.join(format!("coverage_floor{floor}.pgm"));
        grid.write_csv(BufWriter::new(File::create(&csv)?))?;
        grid.write_pgm(BufWriter::new(File::create(&pgm)?))?;
        let valid = grid.values.iter().flatten().count();
        println!(
            "floor {floor}: {}x{} cells, {valid} evaluated, {} skipped -> {}, {}",
            grid.width,
            grid.height,
            grid.warnings,
            csv.display(),
            pgm.display()
        );
    }
    Ok(())
}
