//! Predicted-RSSI heatmaps over a floor plan.
//!
//! The grid covers the plan extent (plus the AP position) padded by one
//! cell on every side. Each cell is evaluated at its centre; cells closer
//! than the model's minimum distance use the value at that distance.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Extent, FloorPlan, Point2, Point3};
use crate::models::{self, Carrier, LinkBudget, LinkContext, PathLossModel};

/// RSSI range mapped onto the 0..=255 gray levels of PGM output.
pub const PGM_RSSI_RANGE_DBM: (f64, f64) = (-100.0, -20.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageGrid {
    /// Lower-left corner of cell (0, 0).
    pub origin: Point2,
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    pub floor: i32,
    /// Row-major predicted RSSI in dBm; row 0 is the lowest `y`. `None`
    /// marks cells the model could not evaluate.
    pub values: Vec<Option<f64>>,
    /// Number of `None` cells.
    pub warnings: usize,
}

impl CoverageGrid {
    pub fn value(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.width + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    /// CSV matrix, one line per grid row starting at the lowest `y`.
    /// Invalid cells are empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut text = String::new();
        for row in self.values.chunks(self.width) {
            let line: Vec<String> = row
                .iter()
                .map(|v| v.map_or_else(String::new, |v| format!("{v:.4}")))
                .collect();
            text.push_str(&line.join(","));
            text.push('\n');
        }
        out.write_all(text.as_bytes())
            .map_err(|e| Error::io("<coverage csv>", e))
    }

    /// Plain (P2) graymap, north up: the first image row is the highest
    /// `y`. Invalid cells are black.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        let mut text = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.values.chunks(self.width).rev() {
            let mut line = String::new();
            for v in row {
                let token = gray_level(*v).to_string();
                if !line.is_empty() && line.len() + 1 + token.len() > 70 {
                    text.push_str(&line);
                    text.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&token);
            }
            text.push_str(&line);
            text.push('\n');
        }
        out.write_all(text.as_bytes())
            .map_err(|e| Error::io("<coverage pgm>", e))
    }
}

/// Linear map of [−100, −20] dBm onto [0, 255], clamped.
pub fn gray_level(rssi_dbm: Option<f64>) -> u8 {
    let Some(v) = rssi_dbm else { return 0 };
    let (lo, hi) = PGM_RSSI_RANGE_DBM;
    let scaled = ((v - lo) / (hi - lo) * 255.0).round();
    scaled.clamp(0.0, 255.0) as u8
}

struct Layout {
    origin: Point2,
    width: usize,
    height: usize,
}

fn layout(plan: &FloorPlan, ap: &Point3, resolution: f64) -> Layout {
    let mut extent = plan.extent().unwrap_or(Extent {
        min_x: ap.x,
        min_y: ap.y,
        max_x: ap.x,
        max_y: ap.y,
    });
    extent.include(ap.planar());
    let cells = |span: f64| ((span / resolution).ceil() as usize).max(1) + 2;
    Layout {
        origin: Point2::new(extent.min_x - resolution, extent.min_y - resolution),
        width: cells(extent.width()),
        height: cells(extent.height()),
    }
}

struct CellEvaluator<'a> {
    plan: &'a FloorPlan,
    ap: &'a Point3,
    model: &'a PathLossModel,
    budget: &'a LinkBudget,
    carrier: Carrier,
    floor: i32,
    origin: Point2,
    resolution: f64,
}

impl CellEvaluator<'_> {
    fn rssi(&self, ix: usize, iy: usize) -> Option<f64> {
        let rx = Point3::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
            self.floor,
        );
        let d = geometry::distance(self.ap, &rx, self.plan).max(self.model.min_distance_m());
        let obstructions = geometry::link_obstructions(self.plan, self.ap, &rx).ok()?;
        let ctx = LinkContext::new(self.carrier, d)
            .with_obstructions(obstructions)
            .with_floor_delta(geometry::floor_delta(self.ap, &rx));
        let pl = self.model.path_loss(&ctx).ok()?;
        Some(models::predicted_rssi(pl, self.budget))
    }

    fn row(&self, iy: usize, width: usize) -> Vec<Option<f64>> {
        (0..width).map(|ix| self.rssi(ix, iy)).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    plan: &FloorPlan,
    ap: &Point3,
    model: &PathLossModel,
    budget: &LinkBudget,
    carrier: Carrier,
    floor: i32,
    resolution: f64,
    parallel: bool,
) -> Result<CoverageGrid> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be positive, got {resolution}"
        )));
    }
    plan.check_point(ap)?;
    plan.check_point(&Point3::new(ap.x, ap.y, floor))?;
    let Layout {
        origin,
        width,
        height,
    } = layout(plan, ap, resolution);
    let eval = CellEvaluator {
        plan,
        ap,
        model,
        budget,
        carrier,
        floor,
        origin,
        resolution,
    };
    let rows: Vec<Vec<Option<f64>>> = if parallel {
        (0..height)
            .into_par_iter()
            .map(|iy| eval.row(iy, width))
            .collect()
    } else {
        (0..height).map(|iy| eval.row(iy, width)).collect()
    };
    let values: Vec<Option<f64>> = rows.into_iter().flatten().collect();
    let warnings = values.iter().filter(|v| v.is_none()).count();
    Ok(CoverageGrid {
        origin,
        resolution,
        width,
        height,
        floor,
        values,
        warnings,
    })
}

/// Predicted RSSI from an AP at `ap` over `floor`, computed in parallel
/// over grid rows.
pub fn coverage_grid(
    plan: &FloorPlan,
    ap: &Point3,
    model: &PathLossModel,
    budget: &LinkBudget,
    carrier: impl Into<Carrier>,
    floor: i32,
    resolution: f64,
) -> Result<CoverageGrid> {
    build(
        plan,
        ap,
        model,
        budget,
        carrier.into(),
        floor,
        resolution,
        true,
    )
}

/// Single-threaded variant of [`coverage_grid`]; produces the same grid.
pub fn coverage_grid_sequential(
    plan: &FloorPlan,
    ap: &Point3,
    model: &PathLossModel,
    budget: &LinkBudget,
    carrier: impl Into<Carrier>,
    floor: i32,
    resolution: f64,
) -> Result<CoverageGrid> {
    build(
        plan,
        ap,
        model,
        budget,
        carrier.into(),
        floor,
        resolution,
        false,
    )
}
