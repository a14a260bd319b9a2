//! Path loss models for the 2.4 GHz band.
//!
//! * ITU-R indoor: `20 log10 f + N log10 d + P_f(n) − 28`
//! * Log-distance: `20 log10(4π d0 / λ) + 10 γ log10(d / d0)`
//! * T-IPLM: `20 log10 f + N_T log10 d + Σ L_w + FAF − 20`
//!
//! `f` is in MHz and `d` in metres. All models reject distances below 1 m
//! (below `d0` for log-distance) instead of extrapolating.

mod params;
pub mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use params::{ItuEnvironment, ItuRParams, LogDistanceParams, ModelParams, TIplmParams};

use crate::error::{Error, Result};
use crate::geometry::{Material, ObstructionSummary};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A 2.4 GHz WiFi channel number, 1 through 14.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Channel(u8);

impl Channel {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=14).contains(&index) {
            Ok(Channel(index))
        } else {
            Err(Error::InvalidParameter(format!(
                "channel must be in 1..=14, got {index}"
            )))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn frequency_mhz(self) -> f64 {
        tables::CHANNEL_FREQUENCIES_MHZ[usize::from(self.0) - 1]
    }

    /// The channel whose centre frequency is exactly `mhz`, if any.
    pub fn from_frequency(mhz: f64) -> Option<Self> {
        tables::CHANNEL_FREQUENCIES_MHZ
            .iter()
            .position(|&f| f == mhz)
            .map(|i| Channel(i as u8 + 1))
    }

    pub fn all() -> impl Iterator<Item = Channel> {
        (1..=14).map(Channel)
    }
}

impl TryFrom<u8> for Channel {
    type Error = Error;

    fn try_from(index: u8) -> Result<Self> {
        Channel::new(index)
    }
}

impl From<Channel> for u8 {
    fn from(c: Channel) -> u8 {
        c.0
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let index: u8 = s
            .trim()
            .parse()
            .map_err(|_| format!("channel must be an integer in 1..=14, got `{s}`"))?;
        Channel::new(index).map_err(|e| e.to_string())
    }
}

pub fn channel_to_frequency(c: Channel) -> f64 {
    c.frequency_mhz()
}

/// Operating frequency, with the channel it belongs to when known. The
/// channel selects the T-IPLM N_T row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Carrier {
    pub frequency_mhz: f64,
    pub channel: Option<Channel>,
}

impl Carrier {
    /// Frequency-only carrier; the channel is recovered when `mhz` is a
    /// channel centre.
    pub fn from_frequency(mhz: f64) -> Self {
        Self {
            frequency_mhz: mhz,
            channel: Channel::from_frequency(mhz),
        }
    }
}

impl From<f64> for Carrier {
    fn from(mhz: f64) -> Self {
        Carrier::from_frequency(mhz)
    }
}

impl From<Channel> for Carrier {
    fn from(c: Channel) -> Self {
        Self {
            frequency_mhz: c.frequency_mhz(),
            channel: Some(c),
        }
    }
}

/// Transmit power and antenna gains used to convert between RSSI and path
/// loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
}

impl LinkBudget {
    pub fn new(tx_power_dbm: f64, tx_gain_dbi: f64, rx_gain_dbi: f64) -> Result<Self> {
        if ![tx_power_dbm, tx_gain_dbi, rx_gain_dbi]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::InvalidParameter(
                "link budget values must be finite".into(),
            ));
        }
        Ok(Self {
            tx_power_dbm,
            tx_gain_dbi,
            rx_gain_dbi,
        })
    }

    fn total(&self) -> f64 {
        self.tx_power_dbm + self.tx_gain_dbi + self.rx_gain_dbi
    }
}

impl Default for LinkBudget {
    /// 15 dBm transmit power, isotropic antennas.
    fn default() -> Self {
        Self {
            tx_power_dbm: 15.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
        }
    }
}

impl fmt::Display for LinkBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.tx_power_dbm, self.tx_gain_dbi, self.rx_gain_dbi
        )
    }
}

impl FromStr for LinkBudget {
    type Err = String;

    /// Parses `tx_dbm,tx_gain_dbi,rx_gain_dbi`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| format!("expected `txdbm,txgain,rxgain`, got `{s}`"))?;
        match values[..] {
            [p, tg, rg] => LinkBudget::new(p, tg, rg).map_err(|e| e.to_string()),
            _ => Err(format!("expected three comma-separated values, got `{s}`")),
        }
    }
}

pub fn predicted_rssi(path_loss_db: f64, budget: &LinkBudget) -> f64 {
    budget.total() - path_loss_db
}

pub fn rssi_to_path_loss(rssi_dbm: f64, budget: &LinkBudget) -> f64 {
    budget.total() - rssi_dbm
}

/// Site category selecting the T-IPLM distance coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Cubicles and partitions; N_T depends on channel and obstacle count.
    #[default]
    BusyOffice,
    /// No major obstacle for 10-15 m; N_T depends on channel.
    OpenSpace,
    Corridor,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::BusyOffice => "busy",
            Scenario::OpenSpace => "open",
            Scenario::Corridor => "corridor",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "busy" | "busy_office" | "busy-office" => Ok(Scenario::BusyOffice),
            "open" | "open_space" | "open-space" => Ok(Scenario::OpenSpace),
            "corridor" => Ok(Scenario::Corridor),
            _ => Err(format!(
                "unknown scenario `{s}` (expected busy, open or corridor)"
            )),
        }
    }
}

/// Everything the models need to know about one transmitter-receiver link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkContext {
    pub carrier: Carrier,
    pub distance_m: f64,
    pub obstructions: ObstructionSummary,
    pub floor_delta: i32,
    pub scenario: Scenario,
}

impl LinkContext {
    pub fn new(carrier: impl Into<Carrier>, distance_m: f64) -> Self {
        Self {
            carrier: carrier.into(),
            distance_m,
            obstructions: ObstructionSummary::new(),
            floor_delta: 0,
            scenario: Scenario::BusyOffice,
        }
    }

    pub fn with_obstructions(mut self, obstructions: ObstructionSummary) -> Self {
        self.obstructions = obstructions;
        self
    }

    pub fn with_floor_delta(mut self, floor_delta: i32) -> Self {
        self.floor_delta = floor_delta;
        self
    }

    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario;
        self
    }
}

fn check_frequency(f_mhz: f64) -> Result<()> {
    if f_mhz.is_finite() && f_mhz > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "frequency must be positive, got {f_mhz} MHz"
        )))
    }
}

fn check_distance(d: f64, min: f64) -> Result<()> {
    if d.is_finite() && d >= min {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "distance {d} m is below the {min} m minimum of the model"
        )))
    }
}

pub fn itu_r_path_loss(f_mhz: f64, d_m: f64, p: &ItuRParams, n_floors: u32) -> Result<f64> {
    check_frequency(f_mhz)?;
    check_distance(d_m, 1.0)?;
    let floor_loss = p.floor_loss(n_floors)?;
    Ok(20.0 * f_mhz.log10() + p.n_coeff * d_m.log10() + floor_loss - 28.0)
}

pub fn log_distance_path_loss(f_mhz: f64, d_m: f64, p: &LogDistanceParams) -> Result<f64> {
    check_frequency(f_mhz)?;
    p.validate()?;
    check_distance(d_m, p.d0_m)?;
    Ok(free_space_reference_db(f_mhz, p.d0_m) + 10.0 * p.gamma * (d_m / p.d0_m).log10())
}

/// Free-space loss at the reference distance, `20 log10(4π d0 / λ)`.
pub fn free_space_reference_db(f_mhz: f64, d0_m: f64) -> f64 {
    let wavelength = SPEED_OF_LIGHT / (f_mhz * 1e6);
    20.0 * (4.0 * std::f64::consts::PI * d0_m / wavelength).log10()
}

/// Distance coefficient N_T for a scenario.
///
/// Busy office rows are indexed by obstacle count; counts above 5 use the
/// 5-obstacle entry and a count of 0 falls back to the open-space value.
pub fn lookup_nt(
    p: &TIplmParams,
    channel: Option<Channel>,
    scenario: Scenario,
    obstacle_count: u32,
) -> Result<f64> {
    let open = |ch: Channel| {
        p.nt_open_space
            .get(&ch.index())
            .copied()
            .ok_or_else(|| Error::MissingParameter(format!("open-space N_T for channel {ch}")))
    };
    let need_channel = || {
        channel.ok_or_else(|| {
            Error::MissingParameter(format!(
                "N_T for scenario `{scenario}` needs a channel; the frequency is not a channel centre"
            ))
        })
    };
    match scenario {
        Scenario::Corridor => Ok(p.nt_corridor),
        Scenario::OpenSpace => open(need_channel()?),
        Scenario::BusyOffice => {
            let ch = need_channel()?;
            if obstacle_count == 0 {
                return open(ch);
            }
            let row = p.nt_busy_office.get(&ch.index()).ok_or_else(|| {
                Error::MissingParameter(format!("busy-office N_T for channel {ch}"))
            })?;
            Ok(row[obstacle_count.min(5) as usize - 1])
        }
    }
}

pub fn lookup_faf(p: &TIplmParams, floor_delta: i32) -> Result<f64> {
    p.faf
        .get(&floor_delta)
        .copied()
        .ok_or_else(|| Error::MissingParameter(format!("FAF for floor difference {floor_delta:+}")))
}

pub fn wall_loss(p: &TIplmParams, material: &Material) -> Result<f64> {
    match material {
        Material::Custom { loss_db, .. } => Ok(*loss_db),
        builtin => p
            .wall_loss
            .get(builtin.name())
            .copied()
            .ok_or_else(|| Error::MissingParameter(format!("wall loss for {}", builtin.name()))),
    }
}

pub fn wall_loss_sum(p: &TIplmParams, obs: &ObstructionSummary) -> Result<f64> {
    obs.iter()
        .map(|(material, count)| Ok(f64::from(count) * wall_loss(p, material)?))
        .sum()
}

/// Every T-IPLM term except `N_T log10 d`.
pub(crate) fn tiplm_fixed_terms(
    f_mhz: f64,
    obs: &ObstructionSummary,
    floor_delta: i32,
    p: &TIplmParams,
) -> Result<f64> {
    check_frequency(f_mhz)?;
    Ok(20.0 * f_mhz.log10() + wall_loss_sum(p, obs)? + lookup_faf(p, floor_delta)? - 20.0)
}

pub fn tiplm_path_loss(ctx: &LinkContext, p: &TIplmParams) -> Result<f64> {
    check_distance(ctx.distance_m, 1.0)?;
    let fixed = tiplm_fixed_terms(
        ctx.carrier.frequency_mhz,
        &ctx.obstructions,
        ctx.floor_delta,
        p,
    )?;
    let nt = lookup_nt(
        p,
        ctx.carrier.channel,
        ctx.scenario,
        ctx.obstructions.total(),
    )?;
    Ok(fixed + nt * ctx.distance_m.log10())
}

/// A model together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PathLossModel {
    TIplm {
        params: TIplmParams,
        scenario: Scenario,
    },
    ItuR(ItuRParams),
    LogDistance(LogDistanceParams),
}

impl PathLossModel {
    pub fn name(&self) -> &'static str {
        match self {
            PathLossModel::TIplm { .. } => "T-IPLM",
            PathLossModel::ItuR(_) => "ITU-R",
            PathLossModel::LogDistance(_) => "Log-distance",
        }
    }

    /// Path loss in dB. T-IPLM uses its own scenario rather than the one in
    /// `ctx`; ITU-R counts `|floor_delta|` floors; log-distance ignores
    /// walls and floors.
    pub fn path_loss(&self, ctx: &LinkContext) -> Result<f64> {
        match self {
            PathLossModel::TIplm { params, scenario } => {
                if *scenario == ctx.scenario {
                    tiplm_path_loss(ctx, params)
                } else {
                    tiplm_path_loss(&ctx.clone().with_scenario(*scenario), params)
                }
            }
            PathLossModel::ItuR(p) => itu_r_path_loss(
                ctx.carrier.frequency_mhz,
                ctx.distance_m,
                p,
                ctx.floor_delta.unsigned_abs(),
            ),
            PathLossModel::LogDistance(p) => {
                log_distance_path_loss(ctx.carrier.frequency_mhz, ctx.distance_m, p)
            }
        }
    }

    /// Smallest distance the model accepts.
    pub fn min_distance_m(&self) -> f64 {
        match self {
            PathLossModel::LogDistance(p) => p.d0_m.max(1.0),
            _ => 1.0,
        }
    }

    /// The three models configured from one parameter set, in report order.
    pub fn standard_set(params: &ModelParams, scenario: Scenario) -> Vec<PathLossModel> {
        vec![
            PathLossModel::TIplm {
                params: params.tiplm.clone(),
                scenario,
            },
            PathLossModel::ItuR(params.itu_r.clone()),
            PathLossModel::LogDistance(params.log_distance),
        ]
    }
}
