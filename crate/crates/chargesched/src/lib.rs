//! Optimal periodic recharge scheduling for heterogeneous robot fleets.
//!
//! Each robot alternates between charging (`c_i` slots on a station) and
//! flying (`f_i` slots), repeating every `T_i = c_i + f_i` slots. The crate
//! answers four questions about such fleets:
//!
//! * [`optimizer::solve_min_stations`] — the fewest charging stations that
//!   can host the whole fleet, with the phase offsets that achieve it.
//! * [`optimizer::solve_max_flytime`] — which robots to deploy, and how, to
//!   maximize total flying time under a fixed station budget.
//! * [`horizon::reduce_horizon`] — trading a bounded fraction of flying
//!   time for a much shorter scheduling horizon.
//! * [`replan::replan_delayed`] — re-phasing a tardy robot with minimum
//!   wait and zero disruption to the rest of the fleet.
//!
//! [`tpws`] implements the power-of-two rounding baseline the exact solver
//! is benchmarked against, and [`oracle`] holds the brute-force references
//! the test suite trusts.

pub mod error;
pub mod files;
pub mod horizon;
pub mod instances;
pub mod optimizer;
pub mod oracle;
pub mod render;
pub mod replan;
pub mod schedule;
pub mod tpws;

pub use error::{Error, Result};
pub use schedule::{
    OccupancyProfile, PhaseAssignment, RobotId, RobotSpec, Schedule, ValidationReport,
};
