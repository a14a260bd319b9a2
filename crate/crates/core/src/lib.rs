//! Indoor path loss modelling for 2.4 GHz WiFi.
//!
//! The crate implements T-IPLM (an ITU-R style model with a
//! channel/obstacle dependent distance coefficient, per-wall losses and
//! floor attenuation factors) next to the ITU-R indoor and log-distance
//! models, together with the tooling to use them on real sites:
//!
//! * [`geometry`]: floor plans, 3D distances and line-of-sight wall counts
//! * [`models`]: the three path loss formulas and their parameter tables
//! * [`ingest`]: drive-test CSV logs and per-location cleansing
//! * [`calibrate`]: least-squares fits, residual statistics, MSE comparison
//! * [`coverage`]: predicted-RSSI heatmaps (CSV and PGM)
//! * [`synth`]: seeded synthetic drive tests
//! * [`cli`]: the `tiplm` command-line front end
//!
//! ```
//! use tiplm::geometry::ObstructionSummary;
//! use tiplm::models::{tiplm_path_loss, Channel, LinkContext, TIplmParams};
//!
//! let walls: ObstructionSummary = "concrete:2,glass:1".parse().unwrap();
//! let ctx = LinkContext::new(Channel::new(1).unwrap(), 10.0).with_obstructions(walls);
//! let pl = tiplm_path_loss(&ctx, &TIplmParams::default()).unwrap();
//! assert!((pl - 89.4075).abs() < 1e-4);
//! ```

pub mod calibrate;
pub mod cli;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod models;
pub mod synth;

pub use error::{Error, Result};
