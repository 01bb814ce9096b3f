//! Time-asymmetric cross-correlation between overnight and intra-day
//! volatilities of equity prices.
//!
//! The pipeline is `ingest -> cleaning -> returns -> asymmetry -> report`,
//! with `synth` providing generators of known correlation structure.

pub mod asymmetry;
pub mod cleaning;
pub mod error;
pub mod ingest;
pub mod rank_stats;
pub mod report;
pub mod returns;
pub mod synth;

pub use error::{Error, ErrorClass, Result};
