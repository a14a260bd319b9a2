//! Loads a floor plan and reports distance, wall crossings and floor
//! difference for a few links from one access point.
//!
//! cargo run --example floor_plan_obstructions -- [plan.json]

use tiplm::geometry::{self, FloorPlan, Point3};

fn main() -> tiplm::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/office.json").to_owned());
    let plan = FloorPlan::load(&path)?;
    println!(
        "plan {:?}: {} floors, {} walls, {} pillars",
        plan.name(),
        plan.floor_count(),
        plan.walls().len(),
        plan.pillars().len()
    );

    let ap = Point3::new(12.0, 11.5, 0);
    let receivers = [
        Point3::new(12.0, 13.0, 0),
        Point3::new(2.0, 2.0, 0),
        Point3::new(22.0, 4.0, 0),
        Point3::new(6.0, 11.5, 0),
        Point3::new(12.0, 11.5, 1),
        Point3::new(20.0, 2.0, 1),
    ];
    for rx in receivers {
        let d = geometry::distance(&ap, &rx, &plan);
        let delta = geometry::floor_delta(&ap, &rx);
        let obs = geometry::link_obstructions(&plan, &ap, &rx)?;
        println!("{ap} -> {rx}: {d:7.3} m, floor delta {delta:+}, obstructions {obs}");
    }
    Ok(())
}
