//! Synthetic drive tests drawn from T-IPLM plus Gaussian noise.
//!
//! Generation is a pure function of [`SynthConfig`]. Random numbers come
//! from a single ChaCha20 stream (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(cfg.seed)`. Draws happen in this fixed order:
//!
//! 1. for each location, candidate positions are drawn until one lies at
//!    least 1 m from the AP: `x` then `y`, each uniform over the plan
//!    extent, then, when more than one receiver floor is configured, a
//!    uniform floor index;
//! 2. then `samples_per_location` standard normal draws (rand_distr's
//!    ziggurat `StandardNormal`), each scaled to
//!    `noise_mean + noise_std · z` dB and added to the model path loss.
//!
//! A location is abandoned after 10⁴ rejected candidates.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{self, FloorPlan, Point3};
use crate::ingest::{Measurement, MeasurementSet};
use crate::models::{self, Channel, LinkBudget, LinkContext, Scenario, TIplmParams};

pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Noise mean and standard deviation (dB) of the reference drive-test
/// error histogram.
pub const DEFAULT_NOISE_MEAN_DB: f64 = 0.5;
pub const DEFAULT_NOISE_STD_DB: f64 = 3.58;

pub const SYNTH_TAG: &str = "synthetic";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub plan: FloorPlan,
    pub ap: Point3,
    pub channel: Channel,
    pub scenario: Scenario,
    pub params: TIplmParams,
    pub budget: LinkBudget,
    pub noise_mean: f64,
    pub noise_std: f64,
    pub n_locations: usize,
    pub samples_per_location: usize,
    pub seed: u64,
    /// Floors receivers are placed on; empty means the AP's floor.
    pub rx_floors: Vec<i32>,
}

impl SynthConfig {
    /// Busy-office defaults: 100 locations, 10 samples each, noise
    /// N(0.5, 3.58) dB, seed 0.
    pub fn new(plan: FloorPlan, ap: Point3, channel: Channel) -> Self {
        Self {
            plan,
            ap,
            channel,
            scenario: Scenario::BusyOffice,
            params: TIplmParams::default(),
            budget: LinkBudget::default(),
            noise_mean: DEFAULT_NOISE_MEAN_DB,
            noise_std: DEFAULT_NOISE_STD_DB,
            n_locations: 100,
            samples_per_location: 10,
            seed: 0,
            rx_floors: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) || !self.noise_mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise must be finite with non-negative std, got N({}, {})",
                self.noise_mean, self.noise_std
            )));
        }
        if self.n_locations == 0 || self.samples_per_location == 0 {
            return Err(Error::InvalidParameter(
                "n_locations and samples_per_location must be at least 1".into(),
            ));
        }
        self.plan.check_point(&self.ap)?;
        for &floor in &self.rx_floors {
            self.plan
                .check_point(&Point3::new(self.ap.x, self.ap.y, floor))?;
        }
        self.params.validate()
    }
}

fn place_receiver(cfg: &SynthConfig, rng: &mut ChaCha20Rng) -> Result<Point3> {
    let extent = cfg.plan.extent();
    let floors: &[i32] = if cfg.rx_floors.is_empty() {
        std::slice::from_ref(&cfg.ap.floor)
    } else {
        &cfg.rx_floors
    };
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let (u, v): (f64, f64) = (rng.random(), rng.random());
        let (x, y) = match extent {
            Some(e) => (e.min_x + u * e.width(), e.min_y + v * e.height()),
            None => (cfg.ap.x, cfg.ap.y),
        };
        let floor = if floors.len() > 1 {
            floors[rng.random_range(0..floors.len())]
        } else {
            floors[0]
        };
        let rx = Point3::new(x, y, floor);
        if geometry::distance(&cfg.ap, &rx, &cfg.plan) >= 1.0 {
            return Ok(rx);
        }
    }
    Err(Error::GeometryExhausted {
        attempts: MAX_PLACEMENT_ATTEMPTS,
    })
}

/// Noise-free T-IPLM path loss from the configured AP to `rx`.
pub fn model_path_loss(cfg: &SynthConfig, rx: &Point3) -> Result<f64> {
    let ctx = LinkContext::new(cfg.channel, geometry::distance(&cfg.ap, rx, &cfg.plan))
        .with_obstructions(geometry::link_obstructions(&cfg.plan, &cfg.ap, rx)?)
        .with_floor_delta(geometry::floor_delta(&cfg.ap, rx))
        .with_scenario(cfg.scenario);
    models::tiplm_path_loss(&ctx, &cfg.params)
}

/// Generates a measurement set. Timestamps count seconds from 0 in record
/// order.
pub fn generate(cfg: &SynthConfig) -> Result<MeasurementSet> {
    cfg.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut records = Vec::with_capacity(cfg.n_locations * cfg.samples_per_location);
    for _ in 0..cfg.n_locations {
        let rx = place_receiver(cfg, &mut rng)?;
        let pl = model_path_loss(cfg, &rx)?;
        for _ in 0..cfg.samples_per_location {
            let z: f64 = rng.sample(StandardNormal);
            let noise = cfg.noise_mean + cfg.noise_std * z;
            records.push(Measurement {
                timestamp: records.len() as f64,
                channel: cfg.channel,
                tx: cfg.ap,
                rx,
                rssi_dbm: models::predicted_rssi(pl + noise, &cfg.budget),
                tag: SYNTH_TAG.to_owned(),
            });
        }
    }
    Ok(MeasurementSet {
        records,
        budget: cfg.budget,
        plan_ref: Some(cfg.plan.name().to_owned()),
    })
}

/// Synthesis settings as read from a JSON file. The floor plan and model
/// tables are supplied separately.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSettings {
    pub ap: Point3,
    #[serde(default = "default_channel")]
    pub channel: Channel,
    #[serde(default)]
    pub scenario: Scenario,
    #[serde(default)]
    pub budget: LinkBudget,
    #[serde(default = "default_noise_mean")]
    pub noise_mean: f64,
    #[serde(default = "default_noise_std")]
    pub noise_std: f64,
    #[serde(default = "default_locations")]
    pub n_locations: usize,
    #[serde(default = "default_samples")]
    pub samples_per_location: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rx_floors: Vec<i32>,
}

fn default_channel() -> Channel {
    Channel::new(1).expect("channel 1 is valid")
}

fn default_noise_mean() -> f64 {
    DEFAULT_NOISE_MEAN_DB
}

fn default_noise_std() -> f64 {
    DEFAULT_NOISE_STD_DB
}

fn default_locations() -> usize {
    100
}

fn default_samples() -> usize {
    10
}

impl SynthSettings {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::json("synth settings", e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::json(format!("synth settings {}", path.display()), e))
    }

    pub fn into_config(self, plan: FloorPlan, params: TIplmParams) -> SynthConfig {
        SynthConfig {
            plan,
            ap: self.ap,
            channel: self.channel,
            scenario: self.scenario,
            params,
            budget: self.budget,
            noise_mean: self.noise_mean,
            noise_std: self.noise_std,
            n_locations: self.n_locations,
            samples_per_location: self.samples_per_location,
            seed: self.seed,
            rx_floors: self.rx_floors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Extent, Material, Point2, WallSegment};

    fn office() -> FloorPlan {
        let mut plan = FloorPlan::new("office", 2)
            .unwrap()
            .with_extent(Extent {
                min_x: 0.0,
                min_y: 0.0,
                max_x: 20.0,
                max_y: 12.0,
            })
            .unwrap();
        for (x, m) in [
            (6.0, Material::Glass),
            (11.0, Material::Wood),
            (15.0, Material::Concrete),
        ] {
            plan.add_wall(WallSegment::new(
                Point2::new(x, 0.0),
                Point2::new(x, 12.0),
                0,
                m,
            ))
            .unwrap();
        }
        plan
    }

    fn config() -> SynthConfig {
        let mut cfg =
            SynthConfig::new(office(), Point3::new(2.0, 6.0, 0), Channel::new(1).unwrap());
        cfg.n_locations = 40;
        cfg.samples_per_location = 5;
        cfg.seed = 7;
        cfg
    }

    #[test]
    fn zero_noise_matches_model() {
        let mut cfg = config();
        cfg.noise_mean = 0.0;
        cfg.noise_std = 0.0;
        let set = generate(&cfg).unwrap();
        assert_eq!(set.len(), 200);
        for m in &set.records {
            let pl = models::rssi_to_path_loss(m.rssi_dbm, &set.budget);
            let truth = model_path_loss(&cfg, &m.rx).unwrap();
            assert!((pl - truth).abs() < 1e-9);
            assert!(geometry::distance(&cfg.ap, &m.rx, &cfg.plan) >= 1.0);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = generate(&config()).unwrap();
        let b = generate(&config()).unwrap();
        assert_eq!(a, b);
        let mut other = config();
        other.seed = 8;
        assert_ne!(a, generate(&other).unwrap());
    }

    #[test]
    fn receivers_on_configured_floors() {
        let mut cfg = config();
        cfg.rx_floors = vec![0, 1];
        let set = generate(&cfg).unwrap();
        let upstairs = set.records.iter().filter(|m| m.rx.floor == 1).count();
        assert!(upstairs > 0 && upstairs < set.len());
    }

    #[test]
    fn exhausted_when_no_room() {
        let plan = FloorPlan::new("closet", 1)
            .unwrap()
            .with_extent(Extent {
                min_x: 0.0,
                min_y: 0.0,
                max_x: 0.5,
                max_y: 0.5,
            })
            .unwrap();
        let cfg = SynthConfig::new(plan, Point3::new(0.25, 0.25, 0), Channel::new(1).unwrap());
        assert!(matches!(
            generate(&cfg),
            Err(Error::GeometryExhausted { .. })
        ));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = config();
        cfg.noise_std = -1.0;
        assert!(generate(&cfg).is_err());
        let mut cfg = config();
        cfg.samples_per_location = 0;
        assert!(generate(&cfg).is_err());
        let mut cfg = config();
        cfg.rx_floors = vec![3];
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn settings_file() {
        let s = SynthSettings::from_json(
            r#"{"ap": {"x": 2, "y": 6, "floor": 0}, "channel": 7, "scenario": "open_space",
                "noise_std": 0, "seed": 42}"#,
        )
        .unwrap();
        assert_eq!(s.channel.index(), 7);
        assert_eq!(s.scenario, Scenario::OpenSpace);
        assert_eq!(s.noise_mean, DEFAULT_NOISE_MEAN_DB);
        assert_eq!(s.n_locations, 100);
        let cfg = s.into_config(office(), TIplmParams::default());
        assert_eq!(cfg.seed, 42);
        assert!(
            SynthSettings::from_json(r#"{"ap": {"x": 0, "y": 0, "floor": 0}, "channel": 20}"#)
                .is_err()
        );
    }
}
