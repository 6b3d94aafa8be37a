//! Hazard trajectories of maintained systems and the exponential
//! approximations used to summarise them.
//!
//! The crate is organised bottom-up:
//!
//! - [`hazard`]: piecewise hazard trajectories, validation against the
//!   principles of rational hazard, and the `H`/`R`/`F` calculus.
//! - [`sampling`]: seeded inverse-transform and thinning samplers for the
//!   time of first failure, empirical distributions and KS statistics.
//! - [`scenario`]: degradation + maintenance policy compiled into trajectories.
//! - [`pra`]: constant-rate comparators and the stochastic-ordering report.
//! - [`distance`]: Poisson-approximation distances for discretised failure
//!   processes.
//! - [`grid`], [`schema`], [`export`]: evaluation grids, versioned JSON
//!   documents and CSV/JSON report writers.

pub mod distance;
pub mod export;
pub mod grid;
pub mod hazard;
pub mod pra;
pub mod quadrature;
pub mod sampling;
pub mod scenario;
pub mod schema;

pub use hazard::{
    validate_trajectory, HazardForm, HazardSegment, HazardTrajectory, MaintenanceEpoch,
    TrajectorySpec, ValidationReport,
};
