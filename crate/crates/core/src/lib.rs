//! Merging p-values under uncertain dependence.
//!
//! The crate provides the combining functions (generalized means, the Cauchy
//! combination, order-statistic and Simes functions), their validity
//! thresholds under arbitrary dependence (VAD), independence (VI) and
//! comonotonicity (VC), prices for validity, Monte Carlo size and power
//! experiments over dependent p-values, and a sequential procedure that
//! removes the smallest p-value until the merged p-value is no longer
//! significant.

pub mod combiners;
pub mod dependence_sim;
pub mod error;
pub mod numfmt;
pub mod sequential;
pub mod special;
pub mod thresholds;

pub use combiners::{combine, ExtendedReal, MergingMethod, PValueVector};
pub use error::{Error, Result};
pub use thresholds::{Mode, ThresholdKind, ThresholdQuery, ThresholdResult};
