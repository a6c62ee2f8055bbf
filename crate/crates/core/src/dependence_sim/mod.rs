//! Dependent p-value generators, rejection-probability experiments and
//! empirical checks of IC-balance.
//!
//! Every replication draws from its own counter-based stream (see [`rng`]),
//! and rejection counts are reduced as integers, so results depend only on
//! the master seed and not on the number of worker threads.

mod experiment;
mod ic;
mod model;
pub mod rng;

pub use experiment::{
    default_method_specs, default_rho_grid, estimate_rp, sweep_rho, write_curve_csv, CurvePoint,
    ExperimentConfig, MethodRp, MethodSpec, RpEstimate, SignalCase, SweepConfig,
    DEFAULT_REPLICATIONS,
};
pub use ic::{ic_balance_check, ks_critical_value, ks_two_sample, IcCheck};
pub use model::{sample_pvalues, DependenceModel};
