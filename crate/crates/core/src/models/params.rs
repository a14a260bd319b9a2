//! Parameter bundles for the three models and the JSON override file.
//!
//! The override file has up to three sections, each optional and each
//! merged key by key onto the built-in defaults:
//!
//! ```json
//! {
//!   "tiplm": {
//!     "nt_busy_office": { "6": [30.0, 29.5, 29.0, 28.8, 28.6] },
//!     "nt_open_space": { "6": 18.5 },
//!     "nt_corridor": 25.8,
//!     "wall_loss": { "glass": 4.2 },
//!     "faf": { "-3": 44.0 }
//!   },
//!   "itu_r": { "n_coeff": 28.0, "floor_penetration": { "1": 12.0 } },
//!   "log_distance": { "gamma": 3.2, "d0_m": 1.0 }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tables;
use crate::error::{Error, Result};

/// ITU-R indoor model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItuRParams {
    /// Distance power loss coefficient N.
    pub n_coeff: f64,
    /// Floor penetration loss P_f(n) in dB for n ≥ 1 floors. P_f(0) is
    /// always 0.
    pub floor_penetration: BTreeMap<u32, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItuEnvironment {
    Office,
    Residential,
    Commercial,
}

impl ItuRParams {
    pub fn for_environment(env: ItuEnvironment) -> Self {
        let n_coeff = match env {
            ItuEnvironment::Office => tables::ITU_R_N_OFFICE,
            ItuEnvironment::Residential => tables::ITU_R_N_RESIDENTIAL,
            ItuEnvironment::Commercial => tables::ITU_R_N_COMMERCIAL,
        };
        Self {
            n_coeff,
            floor_penetration: (1..=tables::ITU_R_DEFAULT_FLOOR_ROWS)
                .map(|n| (n, tables::itu_r_default_floor_penetration(n)))
                .collect(),
        }
    }

    pub fn with_n(mut self, n_coeff: f64) -> Self {
        self.n_coeff = n_coeff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_coeff.is_finite() && self.n_coeff > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ITU-R N must be positive, got {}",
                self.n_coeff
            )));
        }
        for (&n, &loss) in &self.floor_penetration {
            if n == 0 && loss != 0.0 {
                return Err(Error::InvalidParameter("ITU-R P_f(0) must be 0".into()));
            }
            if !(loss.is_finite() && loss >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "ITU-R P_f({n}) must be non-negative, got {loss}"
                )));
            }
        }
        Ok(())
    }

    pub fn floor_loss(&self, n_floors: u32) -> Result<f64> {
        if n_floors == 0 {
            return Ok(0.0);
        }
        self.floor_penetration
            .get(&n_floors)
            .copied()
            .ok_or_else(|| Error::MissingParameter(format!("ITU-R P_f({n_floors})")))
    }
}

impl Default for ItuRParams {
    fn default() -> Self {
        Self::for_environment(ItuEnvironment::Office)
    }
}

/// Log-distance model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDistanceParams {
    /// Path loss exponent γ.
    pub gamma: f64,
    /// Reference distance d0 in metres.
    pub d0_m: f64,
}

impl LogDistanceParams {
    pub fn new(gamma: f64, d0_m: f64) -> Self {
        Self { gamma, d0_m }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "log-distance gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.d0_m.is_finite() && self.d0_m > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "log-distance d0 must be positive, got {}",
                self.d0_m
            )));
        }
        Ok(())
    }
}

impl Default for LogDistanceParams {
    fn default() -> Self {
        Self {
            gamma: 3.0,
            d0_m: 1.0,
        }
    }
}

/// T-IPLM coefficient tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TIplmParams {
    /// Busy-office N_T per channel for 1..=5 obstacles.
    pub nt_busy_office: BTreeMap<u8, [f64; 5]>,
    /// Open-space N_T per channel.
    pub nt_open_space: BTreeMap<u8, f64>,
    /// Corridor N_T, channel independent.
    pub nt_corridor: f64,
    /// L_w in dB keyed by built-in material name.
    pub wall_loss: BTreeMap<String, f64>,
    /// FAF in dB keyed by signed floor difference.
    pub faf: BTreeMap<i32, f64>,
}

impl Default for TIplmParams {
    fn default() -> Self {
        Self {
            nt_busy_office: tables::NT_BUSY_OFFICE.into_iter().collect(),
            nt_open_space: tables::NT_OPEN_SPACE.into_iter().collect(),
            nt_corridor: tables::NT_CORRIDOR,
            wall_loss: tables::WALL_LOSS_DB
                .iter()
                .map(|&(name, loss)| (name.to_owned(), loss))
                .collect(),
            faf: tables::FLOOR_ATTENUATION_DB.into_iter().collect(),
        }
    }
}

impl TIplmParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |what: String, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{what} must be positive, got {v}"
                )))
            }
        };
        for (ch, row) in &self.nt_busy_office {
            for (i, &nt) in row.iter().enumerate() {
                positive(
                    format!("busy-office N_T (channel {ch}, {} obstacles)", i + 1),
                    nt,
                )?;
            }
        }
        for (ch, &nt) in &self.nt_open_space {
            positive(format!("open-space N_T (channel {ch})"), nt)?;
        }
        positive("corridor N_T".into(), self.nt_corridor)?;
        for (name, &loss) in &self.wall_loss {
            positive(format!("wall loss for {name}"), loss)?;
        }
        match self.faf.get(&0) {
            Some(&0.0) => {}
            _ => return Err(Error::InvalidParameter("FAF(0) must be 0".into())),
        }
        for (delta, &v) in &self.faf {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "FAF({delta}) must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Parameters for all three models.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelParams {
    pub tiplm: TIplmParams,
    pub itu_r: ItuRParams,
    pub log_distance: LogDistanceParams,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverrideFile {
    #[serde(default)]
    tiplm: TIplmOverride,
    #[serde(default)]
    itu_r: ItuROverride,
    #[serde(default)]
    log_distance: LogDistanceOverride,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TIplmOverride {
    #[serde(default)]
    nt_busy_office: BTreeMap<u8, [f64; 5]>,
    #[serde(default)]
    nt_open_space: BTreeMap<u8, f64>,
    nt_corridor: Option<f64>,
    #[serde(default)]
    wall_loss: BTreeMap<String, f64>,
    #[serde(default)]
    faf: BTreeMap<i32, f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItuROverride {
    n_coeff: Option<f64>,
    #[serde(default)]
    floor_penetration: BTreeMap<u32, f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogDistanceOverride {
    gamma: Option<f64>,
    d0_m: Option<f64>,
}

impl ModelParams {
    /// Merges an override document onto these parameters and validates the
    /// result.
    pub fn apply_overrides_json(mut self, text: &str) -> Result<Self> {
        let file: OverrideFile =
            serde_json::from_str(text).map_err(|e| Error::json("parameter overrides", e))?;
        let t = file.tiplm;
        self.tiplm.nt_busy_office.extend(t.nt_busy_office);
        self.tiplm.nt_open_space.extend(t.nt_open_space);
        if let Some(nt) = t.nt_corridor {
            self.tiplm.nt_corridor = nt;
        }
        self.tiplm.wall_loss.extend(
            t.wall_loss
                .into_iter()
                .map(|(k, v)| (k.to_ascii_lowercase(), v)),
        );
        self.tiplm.faf.extend(t.faf);

        if let Some(n) = file.itu_r.n_coeff {
            self.itu_r.n_coeff = n;
        }
        self.itu_r
            .floor_penetration
            .extend(file.itu_r.floor_penetration);

        if let Some(gamma) = file.log_distance.gamma {
            self.log_distance.gamma = gamma;
        }
        if let Some(d0) = file.log_distance.d0_m {
            self.log_distance.d0_m = d0;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn load_overrides(self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_overrides_json(&text).map_err(|e| match e {
            Error::Json { source, .. } => {
                Error::json(format!("parameter overrides {}", path.display()), source)
            }
            Error::InvalidParameter(msg) => {
                Error::InvalidParameter(format!("{}: {msg}", path.display()))
            }
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.tiplm.validate()?;
        self.itu_r.validate()?;
        self.log_distance.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ModelParams::default().validate().unwrap();
        let itu = ItuRParams::default();
        assert_eq!(itu.n_coeff, 30.0);
        assert_eq!(itu.floor_loss(0).unwrap(), 0.0);
        assert_eq!(itu.floor_loss(1).unwrap(), 15.0);
        assert_eq!(itu.floor_loss(3).unwrap(), 23.0);
        assert!(matches!(itu.floor_loss(4), Err(Error::MissingParameter(_))));
        assert_eq!(
            ItuRParams::for_environment(ItuEnvironment::Residential).n_coeff,
            28.0
        );
        assert_eq!(
            ItuRParams::for_environment(ItuEnvironment::Commercial).n_coeff,
            22.0
        );
    }

    #[test]
    fn overrides_merge_key_by_key() {
        let text = r#"{
            "tiplm": {
                "nt_busy_office": {"6": [30.0, 29.5, 29.0, 28.8, 28.6]},
                "wall_loss": {"Glass": 4.2},
                "faf": {"-3": 44.0}
            },
            "itu_r": {"n_coeff": 28.0},
            "log_distance": {"gamma": 3.2}
        }"#;
        let p = ModelParams::default().apply_overrides_json(text).unwrap();
        assert_eq!(p.tiplm.nt_busy_office.len(), 4);
        assert_eq!(p.tiplm.nt_busy_office[&1][2], 31.8);
        assert_eq!(p.tiplm.wall_loss["glass"], 4.2);
        assert_eq!(p.tiplm.wall_loss["concrete"], 2.73);
        assert_eq!(p.tiplm.faf[&-3], 44.0);
        assert_eq!(p.itu_r.n_coeff, 28.0);
        assert_eq!(p.log_distance.gamma, 3.2);
        assert_eq!(p.log_distance.d0_m, 1.0);
    }

    #[test]
    fn overrides_are_validated() {
        let zero_faf = r#"{"tiplm": {"faf": {"0": 3.0}}}"#;
        assert!(ModelParams::default()
            .apply_overrides_json(zero_faf)
            .is_err());
        let negative_nt = r#"{"tiplm": {"nt_corridor": -1}}"#;
        assert!(ModelParams::default()
            .apply_overrides_json(negative_nt)
            .is_err());
        let typo = r#"{"tiplm": {"nt_coridor": 20}}"#;
        assert!(ModelParams::default().apply_overrides_json(typo).is_err());
    }
}
