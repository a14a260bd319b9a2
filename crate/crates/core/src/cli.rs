//! The `tiplm` command line: `predict`, `fit`, `compare`, `coverage` and
//! `synth`.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 when data or a
//! model rejects the input. Errors are reported as one line on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::calibrate::{self, Weighting, DEFAULT_HISTOGRAM_BIN_DB};
use crate::coverage;
use crate::error::Error;
use crate::geometry::{self, FloorPlan, ObstructionSummary, Point3};
use crate::ingest::{self, MeasurementSet, DEFAULT_BIN_WIDTH_M};
use crate::models::{
    self, Carrier, Channel, ItuEnvironment, ItuRParams, LinkBudget, LinkContext, ModelParams,
    PathLossModel, Scenario,
};
use crate::synth::{self, SynthSettings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tiplm",
    version,
    about = "Indoor 2.4 GHz path loss: predict, fit, compare, coverage maps and synthetic drive tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Path loss and RSSI for a single link.
    Predict(PredictArgs),
    /// Fit N_T and gamma to a drive-test log.
    Fit(FitArgs),
    /// Rank T-IPLM, ITU-R and log-distance by MSE on a drive-test log.
    Compare(CompareArgs),
    /// Predicted-RSSI heatmap over a floor plan.
    Coverage(CoverageArgs),
    /// Generate a synthetic drive-test log.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Tiplm,
    ItuR,
    LogDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PredictModel {
    Tiplm,
    ItuR,
    LogDistance,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ItuEnv {
    Office,
    Residential,
    Commercial,
}

#[derive(Debug, Args)]
struct CarrierArgs {
    /// WiFi channel (1-14) [default: 1 unless --frequency-mhz is given]
    #[arg(long, value_parser = parse_channel)]
    channel: Option<Channel>,

    /// Carrier frequency in MHz (mutually exclusive with --channel)
    #[arg(long, conflicts_with = "channel")]
    frequency_mhz: Option<f64>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// T-IPLM site category
    #[arg(long, value_parser = parse_scenario, default_value = "busy")]
    scenario: Scenario,

    /// Link budget as `txdbm,txgain,rxgain`
    #[arg(long, value_parser = parse_budget, default_value = "15,0,0", allow_hyphen_values = true)]
    budget: LinkBudget,

    /// JSON file overriding model tables (N_T, L_w, FAF, ITU-R N and P_f,
    /// log-distance gamma and d0). ITU-R floor penetration defaults to
    /// P_f(n) = 15 + 4(n-1) dB, a generic ITU-R office figure rather than
    /// a value measured for T-IPLM; log-distance defaults to gamma = 3,
    /// d0 = 1 m
    #[arg(long)]
    params: Option<PathBuf>,

    /// ITU-R environment selecting N (office 30, residential 28,
    /// commercial 22) [default: office, or the --params value]
    #[arg(long, value_enum)]
    itu_env: Option<ItuEnv>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// Model to evaluate
    #[arg(long, value_enum, default_value = "tiplm")]
    model: PredictModel,

    #[command(flatten)]
    carrier: CarrierArgs,

    #[command(flatten)]
    models: ModelArgs,

    /// Transmitter-receiver distance in metres
    #[arg(long, required_unless_present = "plan", conflicts_with = "plan")]
    distance: Option<f64>,

    /// Obstacles on the line of sight, e.g. `concrete:2,glass:1`
    #[arg(long, value_parser = parse_obstacles, default_value = "none", conflicts_with = "plan")]
    obstacles: ObstructionSummary,

    /// Receiver floor minus transmitter floor
    #[arg(
        long,
        default_value_t = 0,
        allow_hyphen_values = true,
        conflicts_with = "plan"
    )]
    floor_delta: i32,

    /// Floor plan JSON; distance, obstacles and floor difference are taken
    /// from --tx and --rx instead
    #[arg(long, requires_all = ["tx", "rx"])]
    plan: Option<PathBuf>,

    /// Transmitter position `x,y,floor` (with --plan)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, requires = "plan")]
    tx: Option<Point3>,

    /// Receiver position `x,y,floor` (with --plan)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, requires = "plan")]
    rx: Option<Point3>,

    /// Write the results as JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Floor plan JSON
    #[arg(long)]
    plan: PathBuf,

    /// Drive-test CSV log
    #[arg(long)]
    data: PathBuf,

    /// Distance bin width for cleansing, metres
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH_M)]
    bin_width: f64,

    /// Weight aggregated points by their sample count in fits
    #[arg(long)]
    weighted: bool,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,

    #[command(flatten)]
    carrier: CarrierArgs,

    #[command(flatten)]
    models: ModelArgs,

    /// Histogram bin width for cleansing residuals, dB
    #[arg(long, default_value_t = DEFAULT_HISTOGRAM_BIN_DB)]
    histogram_bin: f64,

    /// Write the residual histogram as CSV (`bin_low,bin_high,count`)
    #[arg(long)]
    histogram: Option<PathBuf>,

    /// Write the fit results as JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,

    #[command(flatten)]
    carrier: CarrierArgs,

    #[command(flatten)]
    models: ModelArgs,

    /// Write the comparison report as JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    /// Floor plan JSON
    #[arg(long)]
    plan: PathBuf,

    /// Access point position `x,y,floor`
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    ap: Point3,

    /// Floor to map [default: the AP's floor]
    #[arg(long)]
    floor: Option<i32>,

    /// Model to evaluate
    #[arg(long, value_enum, default_value = "tiplm")]
    model: ModelChoice,

    #[command(flatten)]
    carrier: CarrierArgs,

    #[command(flatten)]
    models: ModelArgs,

    /// Grid cell size in metres
    #[arg(long, default_value_t = 0.5)]
    resolution: f64,

    /// CSV matrix output (one line per grid row, lowest y first)
    #[arg(long)]
    out: PathBuf,

    /// Optional plain PGM (P2) heatmap, -100..-20 dBm mapped to 0..255
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Floor plan JSON
    #[arg(long)]
    plan: PathBuf,

    /// JSON settings file; flags given on the command line take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    /// Access point position `x,y,floor` (required without --config)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    ap: Option<Point3>,

    /// WiFi channel (1-14) [default: 1]
    #[arg(long, value_parser = parse_channel)]
    channel: Option<Channel>,

    /// T-IPLM site category [default: busy]
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,

    /// Link budget as `txdbm,txgain,rxgain` [default: 15,0,0]
    #[arg(long, value_parser = parse_budget, allow_hyphen_values = true)]
    budget: Option<LinkBudget>,

    /// JSON file overriding T-IPLM tables
    #[arg(long)]
    params: Option<PathBuf>,

    /// Random seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Number of receiver locations [default: 100]
    #[arg(long)]
    locations: Option<usize>,

    /// Samples per location [default: 10]
    #[arg(long)]
    samples: Option<usize>,

    /// Noise mean in dB [default: 0.5]
    #[arg(long, allow_hyphen_values = true)]
    noise_mean: Option<f64>,

    /// Noise standard deviation in dB [default: 3.58]
    #[arg(long)]
    noise_std: Option<f64>,

    /// Comma-separated receiver floors [default: the AP's floor]
    #[arg(long, value_delimiter = ',')]
    rx_floors: Option<Vec<i32>>,

    /// Output CSV file [default: standard output]
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_channel(s: &str) -> Result<Channel, String> {
    s.parse()
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse()
}

fn parse_budget(s: &str) -> Result<LinkBudget, String> {
    s.parse()
}

fn parse_obstacles(s: &str) -> Result<ObstructionSummary, String> {
    s.parse()
}

fn parse_point(s: &str) -> Result<Point3, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Data(Error),
    DataIn(PathBuf, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams and returns the exit status.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Predict(args) => predict(args, out),
        Command::Fit(args) => fit(args, out),
        Command::Compare(args) => compare(args, out),
        Command::Coverage(args) => coverage_cmd(args, out),
        Command::Synth(args) => synth_cmd(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
        Err(Failure::DataIn(path, e)) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            EXIT_DATA
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e).into())
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e).into())
}

fn load_params(args: &ModelArgs) -> CliResult<ModelParams> {
    let mut params = match &args.params {
        Some(path) => ModelParams::default().load_overrides(path)?,
        None => ModelParams::default(),
    };
    if let Some(env) = args.itu_env {
        let env = match env {
            ItuEnv::Office => ItuEnvironment::Office,
            ItuEnv::Residential => ItuEnvironment::Residential,
            ItuEnv::Commercial => ItuEnvironment::Commercial,
        };
        params.itu_r.n_coeff = ItuRParams::for_environment(env).n_coeff;
    }
    Ok(params)
}

fn explicit_carrier(args: &CarrierArgs) -> CliResult<Option<Carrier>> {
    match (args.channel, args.frequency_mhz) {
        (Some(c), _) => Ok(Some(c.into())),
        (None, Some(f)) if f.is_finite() && f > 0.0 => Ok(Some(Carrier::from_frequency(f))),
        (None, Some(f)) => Err(Failure::Usage(format!(
            "--frequency-mhz must be positive, got {f}"
        ))),
        (None, None) => Ok(None),
    }
}

fn default_carrier(args: &CarrierArgs) -> CliResult<Carrier> {
    Ok(explicit_carrier(args)?.unwrap_or_else(|| Channel::new(1).expect("channel 1").into()))
}

fn build_model(choice: ModelChoice, params: &ModelParams, scenario: Scenario) -> PathLossModel {
    match choice {
        ModelChoice::Tiplm => PathLossModel::TIplm {
            params: params.tiplm.clone(),
            scenario,
        },
        ModelChoice::ItuR => PathLossModel::ItuR(params.itu_r.clone()),
        ModelChoice::LogDistance => PathLossModel::LogDistance(params.log_distance),
    }
}

fn describe_carrier(c: &Carrier) -> String {
    match c.channel {
        Some(ch) => format!("channel {ch}, {} MHz", c.frequency_mhz),
        None => format!("{} MHz", c.frequency_mhz),
    }
}

#[derive(Serialize)]
struct Prediction {
    model: String,
    frequency_mhz: f64,
    distance_m: f64,
    obstructions: String,
    floor_delta: i32,
    path_loss_db: f64,
    rssi_dbm: f64,
}

fn predict(args: PredictArgs, out: &mut dyn Write) -> CliResult {
    let params = load_params(&args.models)?;
    let carrier = default_carrier(&args.carrier)?;
    let ctx = match (&args.plan, args.tx, args.rx) {
        (Some(path), Some(tx), Some(rx)) => {
            let plan = FloorPlan::load(path)?;
            plan.check_point(&tx)?;
            plan.check_point(&rx)?;
            LinkContext::new(carrier, geometry::distance(&tx, &rx, &plan))
                .with_obstructions(geometry::link_obstructions(&plan, &tx, &rx)?)
                .with_floor_delta(geometry::floor_delta(&tx, &rx))
        }
        _ => {
            let d = args.distance.ok_or_else(|| {
                Failure::Usage("--distance or --plan/--tx/--rx is required".into())
            })?;
            LinkContext::new(carrier, d)
                .with_obstructions(args.obstacles.clone())
                .with_floor_delta(args.floor_delta)
        }
    }
    .with_scenario(args.models.scenario);

    let choices: &[ModelChoice] = match args.model {
        PredictModel::Tiplm => &[ModelChoice::Tiplm],
        PredictModel::ItuR => &[ModelChoice::ItuR],
        PredictModel::LogDistance => &[ModelChoice::LogDistance],
        PredictModel::All => &[
            ModelChoice::Tiplm,
            ModelChoice::ItuR,
            ModelChoice::LogDistance,
        ],
    };

    let mut text = format!(
        "link: {}, distance {:.4} m, obstructions {}, floor delta {:+}, scenario {}\n",
        describe_carrier(&carrier),
        ctx.distance_m,
        ctx.obstructions,
        ctx.floor_delta,
        ctx.scenario
    );
    let mut results = Vec::new();
    for &choice in choices {
        let model = build_model(choice, &params, args.models.scenario);
        let pl = model.path_loss(&ctx)?;
        let rssi = models::predicted_rssi(pl, &args.models.budget);
        text.push_str(&format!(
            "{}: path loss {pl:.4} dB, predicted RSSI {rssi:.4} dBm\n",
            model.name()
        ));
        results.push(Prediction {
            model: model.name().to_owned(),
            frequency_mhz: carrier.frequency_mhz,
            distance_m: ctx.distance_m,
            obstructions: ctx.obstructions.to_string(),
            floor_delta: ctx.floor_delta,
            path_loss_db: pl,
            rssi_dbm: rssi,
        });
    }
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&results).expect("predictions serialize");
        write_file(path, format!("{json}\n").as_bytes())?;
    }
    emit(out, &text)
}

struct LoadedData {
    plan: FloorPlan,
    carrier: Carrier,
    points: Vec<ingest::AggregatedPoint>,
    set: MeasurementSet,
}

fn load_data(data: &DataArgs, carrier: &CarrierArgs, budget: LinkBudget) -> CliResult<LoadedData> {
    let plan = FloorPlan::load(&data.plan)?;
    let mut set = MeasurementSet::load(&data.data, budget).map_err(|e| match e {
        e @ (Error::Parse { .. } | Error::EmptyInput(_) | Error::Csv(_)) => {
            Failure::DataIn(data.data.clone(), e)
        }
        other => Failure::Data(other),
    })?;
    set.plan_ref = Some(plan.name().to_owned());
    let carrier = match explicit_carrier(carrier)? {
        Some(c) => {
            if let Some(ch) = c.channel {
                set = set.for_channel(ch);
                if set.is_empty() {
                    return Err(Error::EmptyInput(format!(
                        "{} has no records on channel {ch}",
                        data.data.display()
                    ))
                    .into());
                }
            }
            c
        }
        None => {
            let first = set.records[0].channel;
            if set.records.iter().any(|m| m.channel != first) {
                return Err(Error::InvalidParameter(format!(
                    "{} mixes channels; select one with --channel",
                    data.data.display()
                ))
                .into());
            }
            first.into()
        }
    };
    let points = ingest::aggregate(&set, &plan, data.bin_width)?;
    Ok(LoadedData {
        plan,
        carrier,
        points,
        set,
    })
}

fn weighting(data: &DataArgs) -> Weighting {
    if data.weighted {
        Weighting::SampleCount
    } else {
        Weighting::Unweighted
    }
}

#[derive(Serialize)]
struct FitReport {
    frequency_mhz: f64,
    records: usize,
    points: usize,
    fits: Vec<calibrate::FitResult>,
    cleansing_error: calibrate::ErrorStats,
}

fn fit(args: FitArgs, out: &mut dyn Write) -> CliResult {
    let params = load_params(&args.models)?;
    let loaded = load_data(&args.data, &args.carrier, args.models.budget)?;
    let f = loaded.carrier.frequency_mhz;
    let w = weighting(&args.data);

    let mut fits = vec![calibrate::fit_nt_weighted(
        &loaded.points,
        f,
        &params.tiplm,
        w,
    )?];
    fits.extend(calibrate::fit_nt_by_obstacles(&loaded.points, f, &params.tiplm, w)?.into_values());
    fits.push(calibrate::fit_gamma_weighted(
        &loaded.points,
        f,
        params.log_distance.d0_m,
        w,
    )?);

    let residuals = ingest::cleansing_residuals(&loaded.set, &loaded.plan, args.data.bin_width)?;
    let stats = calibrate::error_stats(&residuals, args.histogram_bin)?;

    let mut text = format!(
        "{} records, {} aggregated points, {}\n",
        loaded.set.len(),
        loaded.points.len(),
        describe_carrier(&loaded.carrier)
    );
    for fit in &fits {
        text.push_str(&format!(
            "{} = {:.4} (rms residual {:.4} dB, {} points)\n",
            fit.parameter_name, fit.estimate, fit.residual_rms, fit.sample_count
        ));
    }
    text.push_str(&format!(
        "cleansing error: mean {:.4} dB, std {:.4} dB over {} samples\n",
        stats.mean, stats.std_dev, stats.n
    ));

    if let Some(path) = &args.histogram {
        let mut buf = Vec::new();
        stats.write_histogram_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    if let Some(path) = &args.out {
        let report = FitReport {
            frequency_mhz: f,
            records: loaded.set.len(),
            points: loaded.points.len(),
            fits,
            cleansing_error: stats,
        };
        let json = serde_json::to_string_pretty(&report).expect("fit report serializes");
        write_file(path, format!("{json}\n").as_bytes())?;
    }
    emit(out, &text)
}

fn compare(args: CompareArgs, out: &mut dyn Write) -> CliResult {
    let params = load_params(&args.models)?;
    let loaded = load_data(&args.data, &args.carrier, args.models.budget)?;
    let f = loaded.carrier.frequency_mhz;
    let models = PathLossModel::standard_set(&params, args.models.scenario);
    let mut report = calibrate::compare_models(&loaded.points, loaded.carrier, &models)?;

    let w = weighting(&args.data);
    // fits are informative only; data without a usable design still compares
    if let Ok(nt) = calibrate::fit_nt_weighted(&loaded.points, f, &params.tiplm, w) {
        report.fits.push(nt);
    }
    if let Ok(gamma) = calibrate::fit_gamma_weighted(&loaded.points, f, params.log_distance.d0_m, w)
    {
        report.fits.push(gamma);
    }

    let text = format!(
        "{} records, {} aggregated points, {}, scenario {}\n{report}winner: {}\n",
        loaded.set.len(),
        loaded.points.len(),
        describe_carrier(&loaded.carrier),
        args.models.scenario,
        report.winner
    );
    if let Some(path) = &args.out {
        write_file(path, format!("{}\n", report.to_json()).as_bytes())?;
    }
    emit(out, &text)
}

fn coverage_cmd(args: CoverageArgs, out: &mut dyn Write) -> CliResult {
    let params = load_params(&args.models)?;
    let carrier = default_carrier(&args.carrier)?;
    let plan = FloorPlan::load(&args.plan)?;
    let model = build_model(args.model, &params, args.models.scenario);
    let floor = args.floor.unwrap_or(args.ap.floor);
    let grid = coverage::coverage_grid(
        &plan,
        &args.ap,
        &model,
        &args.models.budget,
        carrier,
        floor,
        args.resolution,
    )?;

    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    write_file(&args.out, &csv)?;
    if let Some(path) = &args.pgm {
        let mut pgm = Vec::new();
        grid.write_pgm(&mut pgm)?;
        write_file(path, &pgm)?;
    }

    let valid: Vec<f64> = grid.values.iter().flatten().copied().collect();
    let mut text = format!(
        "{} grid {}x{} at {} m on floor {floor}, AP {}, {}\n",
        model.name(),
        grid.width,
        grid.height,
        grid.resolution,
        args.ap,
        describe_carrier(&carrier)
    );
    if let (Some(min), Some(max)) = (
        valid.iter().copied().reduce(f64::min),
        valid.iter().copied().reduce(f64::max),
    ) {
        text.push_str(&format!("RSSI range {min:.2} .. {max:.2} dBm\n"));
    }
    if grid.warnings > 0 {
        text.push_str(&format!(
            "warning: {} cells could not be evaluated and were left empty\n",
            grid.warnings
        ));
    }
    emit(out, &text)
}

fn synth_cmd(args: SynthArgs, out: &mut dyn Write) -> CliResult {
    let plan = FloorPlan::load(&args.plan)?;
    let mut settings = match &args.config {
        Some(path) => SynthSettings::load(path)?,
        None => {
            let ap = args
                .ap
                .ok_or_else(|| Failure::Usage("--ap is required without --config".into()))?;
            SynthSettings::from_json(&format!(
                r#"{{"ap": {{"x": {}, "y": {}, "floor": {}}}}}"#,
                ap.x, ap.y, ap.floor
            ))?
        }
    };
    if let Some(ap) = args.ap {
        settings.ap = ap;
    }
    if let Some(c) = args.channel {
        settings.channel = c;
    }
    if let Some(s) = args.scenario {
        settings.scenario = s;
    }
    if let Some(b) = args.budget {
        settings.budget = b;
    }
    if let Some(seed) = args.seed {
        settings.seed = seed;
    }
    if let Some(n) = args.locations {
        settings.n_locations = n;
    }
    if let Some(n) = args.samples {
        settings.samples_per_location = n;
    }
    if let Some(m) = args.noise_mean {
        settings.noise_mean = m;
    }
    if let Some(s) = args.noise_std {
        settings.noise_std = s;
    }
    if let Some(floors) = args.rx_floors {
        settings.rx_floors = floors;
    }
    let params = match &args.params {
        Some(path) => ModelParams::default().load_overrides(path)?,
        None => ModelParams::default(),
    };
    let cfg = settings.into_config(plan, params.tiplm);
    let set = synth::generate(&cfg)?;

    let mut csv = Vec::new();
    set.write_csv(&mut csv)?;
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            emit(
                out,
                &format!(
                    "wrote {} records ({} locations x {} samples, seed {}) to {}\n",
                    set.len(),
                    cfg.n_locations,
                    cfg.samples_per_location,
                    cfg.seed,
                    path.display()
                ),
            )
        }
        None => out
            .write_all(&csv)
            .map_err(|e| Error::io("<stdout>", e).into()),
    }
}
