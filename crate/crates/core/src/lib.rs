//! Channel skewness analysis.
//!
//! Third- and fourth-order approximations to the maximal coding rate of
//! discrete memoryless channels and the Gaussian channel, the matching
//! binary hypothesis testing expansion, and the exact finite-`n` bounds
//! used to check them. All logarithms are natural; information is in nats.

pub mod asymptotics;
pub mod bht;
pub mod dmc;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod geometry;
pub mod numeric;
pub mod sweep;

pub use error::{Error, Precondition, Result};
pub use numeric::{CumulantSet, LogProb};
