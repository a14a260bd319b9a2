//! Path loss and RSSI for one link under all three models.
//!
//! cargo run --example predict_link -- [distance_m] [obstacles] [channel]

use tiplm::geometry::ObstructionSummary;
use tiplm::models::{
    predicted_rssi, Channel, LinkBudget, LinkContext, ModelParams, PathLossModel, Scenario,
};

fn main() -> tiplm::Result<()> {
    let mut args = std::env::args().skip(1);
    let distance: f64 = args
        .next()
        .map_or(10.0, |s| s.parse().expect("distance in metres"));
    let obstacles: ObstructionSummary = args
        .next()
        .map_or_else(|| "concrete:2,glass:1".parse(), |s| s.parse())
        .expect("obstacles like concrete:2,glass:1");
    let channel: Channel = args
        .next()
        .map_or("1".parse(), |s| s.parse())
        .expect("channel 1-14");

    let budget = LinkBudget::default();
    let params = ModelParams::default();
    println!(
        "channel {channel} ({} MHz), {distance} m, obstacles {obstacles}, budget {budget}",
        channel.frequency_mhz()
    );
    for scenario in [
        Scenario::BusyOffice,
        Scenario::OpenSpace,
        Scenario::Corridor,
    ] {
        let ctx = LinkContext::new(channel, distance)
            .with_obstructions(obstacles.clone())
            .with_scenario(scenario);
        println!("\n{scenario}:");
        for model in PathLossModel::standard_set(&params, scenario) {
            let pl = model.path_loss(&ctx)?;
            println!(
                "  {:<13} {pl:8.4} dB  -> {:9.4} dBm",
                model.name(),
                predicted_rssi(pl, &budget)
            );
        }
    }
    Ok(())
}
