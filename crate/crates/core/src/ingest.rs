//! Drive-test logs: CSV parsing and per-location cleansing.
//!
//! The log format is a headed CSV file:
//!
//! ```text
//! timestamp,channel,tx_x,tx_y,tx_floor,rx_x,rx_y,rx_floor,rssi_dbm,tag
//! ```
//!
//! Lines starting with `#` are comments. Rows with an RSSI above 0 dBm or
//! below −120 dBm are rejected.
//!
//! Cleansing groups samples by distance bin, obstruction summary and floor
//! difference, then reports the min, mean and max path loss of each group.
//! The distance reported for a group is the geometric mean of its sample
//! distances, so `log10(distance)` is the mean of the samples' `log10 d`
//! and every log-distance-linear model stays exact on the aggregate.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{self, FloorPlan, ObstructionSummary, Point3};
use crate::models::{self, Channel, LinkBudget};

pub const CSV_HEADER: [&str; 10] = [
    "timestamp",
    "channel",
    "tx_x",
    "tx_y",
    "tx_floor",
    "rx_x",
    "rx_y",
    "rx_floor",
    "rssi_dbm",
    "tag",
];

pub const RSSI_MIN_DBM: f64 = -120.0;
pub const RSSI_MAX_DBM: f64 = 0.0;

/// Distance bin width used when none is given.
pub const DEFAULT_BIN_WIDTH_M: f64 = 0.5;

/// One logged RSSI sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
    pub channel: Channel,
    pub tx: Point3,
    pub rx: Point3,
    pub rssi_dbm: f64,
    /// Free text such as the crowd condition; carried through, never used.
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub records: Vec<Measurement>,
    pub budget: LinkBudget,
    pub plan_ref: Option<String>,
}

impl MeasurementSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records on one channel only.
    pub fn for_channel(&self, channel: Channel) -> MeasurementSet {
        MeasurementSet {
            records: self
                .records
                .iter()
                .filter(|m| m.channel == channel)
                .cloned()
                .collect(),
            budget: self.budget,
            plan_ref: self.plan_ref.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>, budget: LinkBudget) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        parse_measurements(std::io::BufReader::new(file), budget)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_measurements(&self.records, out)
    }
}

/// One cleansed group of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedPoint {
    pub distance_m: f64,
    pub obstructions: ObstructionSummary,
    pub floor_delta: i32,
    pub pl_min: f64,
    pub pl_mean: f64,
    pub pl_max: f64,
    pub sample_count: usize,
}

fn parse_error(row: u64, column: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        row,
        column: column.to_owned(),
        reason: reason.into(),
    }
}

fn field(record: &csv::StringRecord, row: u64, idx: usize) -> Result<&str> {
    record
        .get(idx)
        .ok_or_else(|| parse_error(row, CSV_HEADER[idx], "missing field"))
}

fn parse_f64(record: &csv::StringRecord, row: u64, idx: usize) -> Result<f64> {
    let raw = field(record, row, idx)?;
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| parse_error(row, CSV_HEADER[idx], format!("`{raw}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(
            row,
            CSV_HEADER[idx],
            format!("`{raw}` is not finite"),
        ));
    }
    Ok(v)
}

fn parse_i32(record: &csv::StringRecord, row: u64, idx: usize) -> Result<i32> {
    let raw = field(record, row, idx)?;
    raw.trim()
        .parse()
        .map_err(|_| parse_error(row, CSV_HEADER[idx], format!("`{raw}` is not an integer")))
}

fn parse_row(record: &csv::StringRecord, row: u64) -> Result<Measurement> {
    if record.len() != CSV_HEADER.len() {
        return Err(parse_error(
            row,
            "*",
            format!(
                "expected {} fields, found {}",
                CSV_HEADER.len(),
                record.len()
            ),
        ));
    }
    let channel_raw = field(record, row, 1)?;
    let channel = channel_raw
        .trim()
        .parse::<Channel>()
        .map_err(|reason| parse_error(row, "channel", reason))?;
    let rssi_dbm = parse_f64(record, row, 8)?;
    if !(RSSI_MIN_DBM..=RSSI_MAX_DBM).contains(&rssi_dbm) {
        return Err(parse_error(
            row,
            "rssi_dbm",
            format!("{rssi_dbm} dBm outside [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}]"),
        ));
    }
    Ok(Measurement {
        timestamp: parse_f64(record, row, 0)?,
        channel,
        tx: Point3::new(
            parse_f64(record, row, 2)?,
            parse_f64(record, row, 3)?,
            parse_i32(record, row, 4)?,
        ),
        rx: Point3::new(
            parse_f64(record, row, 5)?,
            parse_f64(record, row, 6)?,
            parse_i32(record, row, 7)?,
        ),
        rssi_dbm,
        tag: field(record, row, 9)?.to_owned(),
    })
}

/// Parses a drive-test CSV log. Row numbers in errors are 1-based file
/// line numbers.
pub fn parse_measurements<R: Read>(source: R, budget: LinkBudget) -> Result<MeasurementSet> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .has_headers(false)
        .from_reader(source);
    let mut rows = reader.records();

    let header = match rows.next() {
        None => return Err(Error::EmptyInput("no header row".into())),
        Some(h) => h.map_err(|e| csv_read_error(&e))?,
    };
    let header_row = header.position().map_or(1, |p| p.line());
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(parse_error(
            header_row,
            "header",
            format!(
                "expected `{}`, found `{}`",
                CSV_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut records = Vec::new();
    for result in rows {
        let record = result.map_err(|e| csv_read_error(&e))?;
        let row = record.position().map_or(0, |p| p.line());
        records.push(parse_row(&record, row)?);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput(
            "no measurement rows after the header".into(),
        ));
    }
    Ok(MeasurementSet {
        records,
        budget,
        plan_ref: None,
    })
}

fn csv_read_error(e: &csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line());
    parse_error(row, "*", e.to_string())
}

/// Writes records in the drive-test CSV schema.
pub fn write_measurements<W: Write>(records: &[Measurement], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for m in records {
        writer.write_record([
            m.timestamp.to_string(),
            m.channel.to_string(),
            m.tx.x.to_string(),
            m.tx.y.to_string(),
            m.tx.floor.to_string(),
            m.rx.x.to_string(),
            m.rx.y.to_string(),
            m.rx.floor.to_string(),
            m.rssi_dbm.to_string(),
            m.tag.clone(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

type GroupKey = (i64, ObstructionSummary, i32);

struct Group {
    members: Vec<usize>,
    log_distances: Vec<f64>,
    path_losses: Vec<f64>,
}

/// Mean of `values` summed in sorted order, so the result does not depend
/// on input order.
fn order_free_mean(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}

fn group_records(
    set: &MeasurementSet,
    plan: &FloorPlan,
    bin_width: f64,
) -> Result<BTreeMap<GroupKey, Group>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let mut groups: BTreeMap<GroupKey, Group> = BTreeMap::new();
    for (i, m) in set.records.iter().enumerate() {
        plan.check_point(&m.tx)?;
        plan.check_point(&m.rx)?;
        let d = geometry::distance(&m.tx, &m.rx, plan);
        let obstructions = geometry::link_obstructions(plan, &m.tx, &m.rx)?;
        let key = (
            (d / bin_width).floor() as i64,
            obstructions,
            geometry::floor_delta(&m.tx, &m.rx),
        );
        let group = groups.entry(key).or_insert_with(|| Group {
            members: Vec::new(),
            log_distances: Vec::new(),
            path_losses: Vec::new(),
        });
        group.members.push(i);
        group.log_distances.push(d.log10());
        group
            .path_losses
            .push(models::rssi_to_path_loss(m.rssi_dbm, &set.budget));
    }
    Ok(groups)
}

/// Cleanses a measurement set into per-location path loss statistics,
/// sorted by ascending distance.
pub fn aggregate(
    set: &MeasurementSet,
    plan: &FloorPlan,
    bin_width: f64,
) -> Result<Vec<AggregatedPoint>> {
    let groups = group_records(set, plan, bin_width)?;
    let mut points: Vec<AggregatedPoint> = groups
        .into_iter()
        .map(|((_, obstructions, floor_delta), mut g)| {
            let pl_mean = order_free_mean(&mut g.path_losses);
            let log_d = order_free_mean(&mut g.log_distances);
            AggregatedPoint {
                distance_m: 10f64.powf(log_d),
                obstructions,
                floor_delta,
                pl_min: g.path_losses[0],
                // guard against the mean drifting past an extreme by one ulp
                pl_mean: pl_mean.clamp(g.path_losses[0], g.path_losses[g.path_losses.len() - 1]),
                pl_max: g.path_losses[g.path_losses.len() - 1],
                sample_count: g.members.len(),
            }
        })
        .collect();
    // stable: equal distances keep the key order
    points.sort_by(|a, b| a.distance_m.total_cmp(&b.distance_m));
    Ok(points)
}

/// Per-record difference between the logged path loss and the mean path
/// loss of its group, in input order.
pub fn cleansing_residuals(
    set: &MeasurementSet,
    plan: &FloorPlan,
    bin_width: f64,
) -> Result<Vec<f64>> {
    let groups = group_records(set, plan, bin_width)?;
    let mut residuals = vec![0.0; set.records.len()];
    for (_, g) in groups {
        let mut sorted = g.path_losses.clone();
        let mean = order_free_mean(&mut sorted);
        for (&i, &pl) in g.members.iter().zip(&g.path_losses) {
            residuals[i] = pl - mean;
        }
    }
    Ok(residuals)
}
