//! Least-squares calibration, residual statistics and MSE model comparison.
//!
//! Both fits are one-parameter linear least squares through the origin:
//! after moving every fixed term to the left-hand side, the remaining
//! path loss `r_i` is modelled as `k · x_i` and
//! `k = Σ w_i r_i x_i / Σ w_i x_i²`.
//!
//! * T-IPLM: `x_i = log10 d_i`, `r_i = PL_i − (20 log10 f + Σ L_w + FAF − 20)`,
//!   `k = N_T`.
//! * Log-distance: `x_i = 10 log10(d_i / d0)`, `r_i = PL_i − 20 log10(4π d0 / λ)`,
//!   `k = γ`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::AggregatedPoint;
use crate::models::{self, Carrier, LinkContext, PathLossModel, TIplmParams};

/// Histogram bin width used when none is given, dB.
pub const DEFAULT_HISTOGRAM_BIN_DB: f64 = 1.0;

/// How aggregated points are weighted in a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Every aggregated point counts once.
    #[default]
    Unweighted,
    /// Points are weighted by the number of samples behind them.
    SampleCount,
}

impl Weighting {
    fn weight(self, p: &AggregatedPoint) -> f64 {
        match self {
            Weighting::Unweighted => 1.0,
            Weighting::SampleCount => p.sample_count as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub parameter_name: String,
    pub estimate: f64,
    /// Root mean square of the fit residuals, dB (unweighted).
    pub residual_rms: f64,
    pub sample_count: usize,
}

fn through_origin(xs: &[f64], ys: &[f64], ws: &[f64]) -> (f64, f64) {
    let sxy: f64 = xs.iter().zip(ys).zip(ws).map(|((x, y), w)| w * x * y).sum();
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * x * x).sum();
    let slope = sxy / sxx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x).powi(2))
        .sum();
    (slope, (sse / xs.len() as f64).sqrt())
}

fn check_design(points: &[AggregatedPoint], xs: &[f64], what: &str) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "fitting {what} needs at least 2 points, got {}",
            points.len()
        )));
    }
    if xs.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateDesign(format!(
            "every point sits at the reference distance; {what} is unidentifiable"
        )));
    }
    let first = points[0].distance_m;
    if points.iter().all(|p| p.distance_m == first) {
        return Err(Error::InsufficientData(format!(
            "fitting {what} needs at least 2 distinct distances"
        )));
    }
    Ok(())
}

/// Least-squares N_T for T-IPLM with unweighted points.
pub fn fit_nt(points: &[AggregatedPoint], f_mhz: f64, p: &TIplmParams) -> Result<FitResult> {
    fit_nt_weighted(points, f_mhz, p, Weighting::Unweighted)
}

pub fn fit_nt_weighted(
    points: &[AggregatedPoint],
    f_mhz: f64,
    p: &TIplmParams,
    weighting: Weighting,
) -> Result<FitResult> {
    if let Some(bad) = points
        .iter()
        .find(|pt| pt.distance_m.is_nan() || pt.distance_m < 1.0)
    {
        return Err(Error::Domain(format!(
            "N_T fit needs distances of at least 1 m, got {} m",
            bad.distance_m
        )));
    }
    let xs: Vec<f64> = points.iter().map(|pt| pt.distance_m.log10()).collect();
    check_design(points, &xs, "N_T")?;
    let ys = points
        .iter()
        .map(|pt| {
            Ok(pt.pl_mean - models::tiplm_fixed_terms(f_mhz, &pt.obstructions, pt.floor_delta, p)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let ws: Vec<f64> = points.iter().map(|pt| weighting.weight(pt)).collect();
    let (estimate, residual_rms) = through_origin(&xs, &ys, &ws);
    Ok(FitResult {
        parameter_name: "N_T".into(),
        estimate,
        residual_rms,
        sample_count: points.len(),
    })
}

/// Fits N_T separately for each total obstacle count, as the busy-office
/// table is organised. Groups that cannot be fitted (too few points, or
/// every point at 1 m) are left out.
pub fn fit_nt_by_obstacles(
    points: &[AggregatedPoint],
    f_mhz: f64,
    p: &TIplmParams,
    weighting: Weighting,
) -> Result<BTreeMap<u32, FitResult>> {
    let mut groups: BTreeMap<u32, Vec<AggregatedPoint>> = BTreeMap::new();
    for pt in points {
        groups
            .entry(pt.obstructions.total())
            .or_default()
            .push(pt.clone());
    }
    let mut fits = BTreeMap::new();
    for (count, group) in groups {
        match fit_nt_weighted(&group, f_mhz, p, weighting) {
            Ok(mut fit) => {
                fit.parameter_name = format!("N_T[obstacles={count}]");
                fits.insert(count, fit);
            }
            Err(Error::InsufficientData(_) | Error::DegenerateDesign(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(fits)
}

/// Least-squares path loss exponent γ for the log-distance model.
pub fn fit_gamma(points: &[AggregatedPoint], f_mhz: f64, d0_m: f64) -> Result<FitResult> {
    fit_gamma_weighted(points, f_mhz, d0_m, Weighting::Unweighted)
}

pub fn fit_gamma_weighted(
    points: &[AggregatedPoint],
    f_mhz: f64,
    d0_m: f64,
    weighting: Weighting,
) -> Result<FitResult> {
    if !(d0_m.is_finite() && d0_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference distance must be positive, got {d0_m}"
        )));
    }
    if !(f_mhz.is_finite() && f_mhz > 0.0) {
        return Err(Error::Domain(format!(
            "frequency must be positive, got {f_mhz} MHz"
        )));
    }
    if let Some(bad) = points
        .iter()
        .find(|pt| pt.distance_m.is_nan() || pt.distance_m < d0_m)
    {
        return Err(Error::Domain(format!(
            "gamma fit needs distances of at least d0 = {d0_m} m, got {} m",
            bad.distance_m
        )));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|pt| 10.0 * (pt.distance_m / d0_m).log10())
        .collect();
    check_design(points, &xs, "gamma")?;
    let reference = models::free_space_reference_db(f_mhz, d0_m);
    let ys: Vec<f64> = points.iter().map(|pt| pt.pl_mean - reference).collect();
    let ws: Vec<f64> = points.iter().map(|pt| weighting.weight(pt)).collect();
    let (estimate, residual_rms) = through_origin(&xs, &ys, &ws);
    Ok(FitResult {
        parameter_name: "gamma".into(),
        estimate,
        residual_rms,
        sample_count: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

/// Mean, population standard deviation and histogram of residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub mean: f64,
    pub std_dev: f64,
    pub histogram: Vec<HistogramBin>,
    pub n: usize,
}

impl ErrorStats {
    /// Histogram as CSV with header `bin_low,bin_high,count`.
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["bin_low", "bin_high", "count"])?;
        for bin in &self.histogram {
            writer.write_record([
                bin.low.to_string(),
                bin.high.to_string(),
                bin.count.to_string(),
            ])?;
        }
        writer
            .flush()
            .map_err(|e| Error::io("<histogram output>", e))?;
        Ok(())
    }
}

/// Residual statistics. Bins start at `floor(min)` and step by
/// `bin_width` until `ceil(max)` is covered; each bin is `[low, high)`
/// except the last, which also holds its upper edge.
pub fn error_stats(residuals: &[f64], bin_width: f64) -> Result<ErrorStats> {
    if residuals.is_empty() {
        return Err(Error::EmptyInput("no residuals".into()));
    }
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "histogram bin width must be positive, got {bin_width}"
        )));
    }
    if let Some(bad) = residuals.iter().find(|r| !r.is_finite()) {
        return Err(Error::Domain(format!("non-finite residual {bad}")));
    }
    let n = residuals.len();
    let mean = residuals.iter().sum::<f64>() / n as f64;
    let variance = residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n as f64;

    let min = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let low = min.floor();
    let span = max.ceil() - low;
    let bins = ((span / bin_width).ceil() as usize).max(1);
    let mut counts = vec![0usize; bins];
    for r in residuals {
        let k = (((r - low) / bin_width).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            low: low + k as f64 * bin_width,
            high: low + (k + 1) as f64 * bin_width,
            count,
        })
        .collect();
    Ok(ErrorStats {
        mean,
        std_dev: variance.sqrt(),
        histogram,
        n,
    })
}

/// Mean squared error between predictions and observed means, dB².
pub fn mse(predicted: &[f64], observed_mean: &[f64]) -> Result<f64> {
    if predicted.len() != observed_mean.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: observed_mean.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput("no values to compare".into()));
    }
    let sse: f64 = predicted
        .iter()
        .zip(observed_mean)
        .map(|(p, o)| (p - o).powi(2))
        .sum();
    Ok(sse / predicted.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelScore {
    pub model: String,
    /// Mean squared error against the observed mean path loss, dB².
    pub mse: f64,
    /// Mean of predicted minus observed, dB.
    pub bias: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub frequency_mhz: f64,
    pub models: Vec<ModelScore>,
    pub winner: String,
    /// Parameters fitted on the same data, if any were requested.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<FitResult>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:>8} {:>12} {:>10}",
            "model", "points", "mse (dB^2)", "bias (dB)"
        )?;
        for s in &self.models {
            let marker = if s.model == self.winner {
                "  <- best"
            } else {
                ""
            };
            writeln!(
                f,
                "{:<14} {:>8} {:>12.4} {:>10.4}{marker}",
                s.model, s.points, s.mse, s.bias
            )?;
        }
        for fit in &self.fits {
            writeln!(
                f,
                "fitted {} = {:.4} (rms residual {:.4} dB over {} points)",
                fit.parameter_name, fit.estimate, fit.residual_rms, fit.sample_count
            )?;
        }
        Ok(())
    }
}

/// Scores each model against the observed mean path loss of every point.
/// The winner is the lowest MSE; ties go to the model listed first.
pub fn compare_models(
    points: &[AggregatedPoint],
    carrier: impl Into<Carrier>,
    models: &[PathLossModel],
) -> Result<ComparisonReport> {
    let carrier = carrier.into();
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "no aggregated points to compare against".into(),
        ));
    }
    if models.is_empty() {
        return Err(Error::EmptyInput("no models to compare".into()));
    }
    let observed: Vec<f64> = points.iter().map(|p| p.pl_mean).collect();
    let mut scores = Vec::with_capacity(models.len());
    for model in models {
        let predicted = points
            .iter()
            .map(|pt| {
                let ctx = LinkContext::new(carrier, pt.distance_m)
                    .with_obstructions(pt.obstructions.clone())
                    .with_floor_delta(pt.floor_delta);
                model.path_loss(&ctx)
            })
            .collect::<Result<Vec<f64>>>()?;
        let bias = predicted
            .iter()
            .zip(&observed)
            .map(|(p, o)| p - o)
            .sum::<f64>()
            / points.len() as f64;
        scores.push(ModelScore {
            model: model.name().to_owned(),
            mse: mse(&predicted, &observed)?,
            bias,
            points: points.len(),
        });
    }
    let winner = scores
        .iter()
        .fold(None::<&ModelScore>, |best, s| match best {
            Some(b) if b.mse <= s.mse => Some(b),
            _ => Some(s),
        })
        .map(|s| s.model.clone())
        .expect("at least one model");
    Ok(ComparisonReport {
        frequency_mhz: carrier.frequency_mhz,
        models: scores,
        winner,
        fits: Vec::new(),
    })
}
