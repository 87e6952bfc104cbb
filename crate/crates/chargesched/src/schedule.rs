//! Cyclic charge/fly state semantics and schedule bookkeeping.
//!
//! A robot alternates between `charge_slots` slots on a station and
//! `fly_slots` slots in the air, repeating every `cycle_time()` slots.
//! The initial state is a one-hot vector over one cycle; we store only
//! the index of the 1 (the phase offset), which fully determines every
//! charging slot of the robot.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Opaque robot identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RobotId(pub String);

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RobotId {
    fn from(s: &str) -> Self {
        RobotId(s.to_owned())
    }
}

/// One robot's operational parameters, all in integer slot counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotSpec {
    pub id: RobotId,
    pub charge_slots: u64,
    pub fly_slots: u64,
    /// Safety-margin fraction: the maximum fraction of residual battery
    /// charge allowed when the robot returns to the station.
    #[serde(default)]
    pub epsilon: f64,
}

impl RobotSpec {
    pub fn new(id: impl Into<RobotId>, charge_slots: u64, fly_slots: u64) -> Result<Self> {
        Self::with_epsilon(id, charge_slots, fly_slots, 0.0)
    }

    pub fn with_epsilon(
        id: impl Into<RobotId>,
        charge_slots: u64,
        fly_slots: u64,
        epsilon: f64,
    ) -> Result<Self> {
        let spec = RobotSpec { id: id.into(), charge_slots, fly_slots, epsilon };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the field invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| Error::InvalidSpec {
            id: self.id.to_string(),
            reason: reason.to_owned(),
        };
        if self.charge_slots == 0 {
            return Err(fail("charge_slots must be >= 1"));
        }
        if self.fly_slots == 0 {
            return Err(fail("fly_slots must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(fail("epsilon must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Cycle time `T_i = c_i + f_i`.
    pub fn cycle_time(&self) -> u64 {
        self.charge_slots + self.fly_slots
    }
}

/// Per-robot cyclic phase: the index of the 1 in the one-hot initial state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub robot_id: RobotId,
    pub offset: u64,
}

impl PhaseAssignment {
    pub fn new(robot_id: impl Into<RobotId>, offset: u64) -> Self {
        PhaseAssignment { robot_id: robot_id.into(), offset }
    }
}

/// A complete fleet schedule: solver output and validator input.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub robots: Vec<RobotSpec>,
    /// One entry per deployed robot; robots without a phase are not deployed.
    pub phases: Vec<PhaseAssignment>,
    pub stations: u64,
    pub horizon: u64,
}

/// Per-slot station usage counts over one horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyProfile {
    pub counts: Vec<u32>,
}

impl OccupancyProfile {
    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

#[inline]
pub(crate) fn charging_at(charge_slots: u64, cycle: u64, offset: u64, t: u64) -> bool {
    (offset + t) % cycle < charge_slots
}

/// Visits every charging slot of a robot at phase `offset` over `[0, horizon)`.
/// `horizon` must be a multiple of the robot's cycle time.
pub(crate) fn for_each_charging_slot(
    charge_slots: u64,
    cycle: u64,
    offset: u64,
    horizon: u64,
    mut f: impl FnMut(usize),
) {
    // t is charging iff (offset + t) mod cycle < charge_slots, i.e.
    // t ≡ r - offset (mod cycle) for r in [0, charge_slots).
    let base = (cycle - offset % cycle) % cycle;
    let mut block = 0;
    while block < horizon {
        for r in 0..charge_slots {
            f((block + (base + r) % cycle) as usize);
        }
        block += cycle;
    }
}

fn check_offset(robot: &RobotSpec, offset: u64) -> Result<()> {
    let cycle = robot.cycle_time();
    if offset >= cycle {
        return Err(Error::OffsetOutOfRange { id: robot.id.to_string(), offset, cycle });
    }
    Ok(())
}

/// `z_i(t)`: whether the robot occupies a charging station at slot `t`.
pub fn charging_indicator(robot: &RobotSpec, offset: u64, t: u64) -> Result<bool> {
    check_offset(robot, offset)?;
    Ok(charging_at(robot.charge_slots, robot.cycle_time(), offset, t))
}

/// `y_i(t)`: whether the robot is flying at slot `t`. Complement of
/// [`charging_indicator`] for a deployed robot.
pub fn flying_indicator(robot: &RobotSpec, offset: u64, t: u64) -> Result<bool> {
    check_offset(robot, offset)?;
    Ok(!charging_at(robot.charge_slots, robot.cycle_time(), offset, t))
}

/// Advances a one-hot state vector by one slot (cyclic down-shift).
pub fn advance_state(state: &[bool]) -> Result<Vec<bool>> {
    let ones = state.iter().filter(|&&b| b).count();
    if state.is_empty() || ones != 1 {
        return Err(Error::NotOneHot);
    }
    let n = state.len();
    let mut out = vec![false; n];
    for (i, &b) in state.iter().enumerate() {
        if b {
            out[(i + 1) % n] = true;
        }
    }
    Ok(out)
}

/// Counts charging robots per slot over `[0, horizon)`.
pub fn occupancy_profile(
    robots: &[RobotSpec],
    phases: &[PhaseAssignment],
    horizon: u64,
) -> Result<OccupancyProfile> {
    if horizon == 0 {
        return Err(Error::EmptyInput("horizon must be >= 1"));
    }
    let by_id: HashMap<&RobotId, &RobotSpec> = robots.iter().map(|r| (&r.id, r)).collect();
    let mut counts = vec![0u32; horizon as usize];
    for phase in phases {
        let robot = by_id
            .get(&phase.robot_id)
            .ok_or_else(|| Error::UnknownRobot(phase.robot_id.to_string()))?;
        check_offset(robot, phase.offset)?;
        let cycle = robot.cycle_time();
        let mut t = 0;
        while t < horizon {
            if charging_at(robot.charge_slots, cycle, phase.offset, t) {
                counts[t as usize] += 1;
            }
            t += 1;
        }
    }
    Ok(OccupancyProfile { counts })
}

/// The first constraint a schedule violates, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    HorizonNotMultiple { id: RobotId, cycle: u64, horizon: u64 },
    UnknownRobot { id: RobotId },
    PhaseOutOfRange { id: RobotId, offset: u64, cycle: u64 },
    CapacityExceeded { slot: u64, occupancy: u32, stations: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HorizonNotMultiple { id, cycle, horizon } => write!(
                f,
                "horizon {horizon} is not a multiple of robot `{id}` cycle time {cycle}"
            ),
            Violation::UnknownRobot { id } => write!(f, "phase references unknown robot `{id}`"),
            Violation::PhaseOutOfRange { id, offset, cycle } => {
                write!(f, "offset {offset} out of range for robot `{id}` (cycle {cycle})")
            }
            Violation::CapacityExceeded { slot, occupancy, stations } => write!(
                f,
                "slot {slot}: {occupancy} robots charging with only {stations} stations"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Full-horizon feasibility check: horizon divisibility, phase ranges,
/// and per-slot station capacity. Violations are report content, not errors.
pub fn validate_schedule(schedule: &Schedule) -> ValidationReport {
    let by_id: HashMap<&RobotId, &RobotSpec> =
        schedule.robots.iter().map(|r| (&r.id, r)).collect();
    for phase in &schedule.phases {
        let robot = match by_id.get(&phase.robot_id) {
            Some(r) => r,
            None => {
                return ValidationReport {
                    violation: Some(Violation::UnknownRobot { id: phase.robot_id.clone() }),
                }
            }
        };
        let cycle = robot.cycle_time();
        if schedule.horizon == 0 || !schedule.horizon.is_multiple_of(cycle) {
            return ValidationReport {
                violation: Some(Violation::HorizonNotMultiple {
                    id: robot.id.clone(),
                    cycle,
                    horizon: schedule.horizon,
                }),
            };
        }
        if phase.offset >= cycle {
            return ValidationReport {
                violation: Some(Violation::PhaseOutOfRange {
                    id: robot.id.clone(),
                    offset: phase.offset,
                    cycle,
                }),
            };
        }
    }
    // Phase ranges are known good here, so occupancy_profile cannot fail.
    if schedule.horizon > 0 {
        let profile = occupancy_profile(&schedule.robots, &schedule.phases, schedule.horizon)
            .expect("checked phases");
        for (t, &count) in profile.counts.iter().enumerate() {
            if count as u64 > schedule.stations {
                return ValidationReport {
                    violation: Some(Violation::CapacityExceeded {
                        slot: t as u64,
                        occupancy: count,
                        stations: schedule.stations,
                    }),
                };
            }
        }
    }
    ValidationReport { violation: None }
}

/// Total flying slots of the selected robots over `[0, horizon)`:
/// `Σ f_i · (horizon / T_i)`. Offset-independent.
pub fn total_flying(robots: &[RobotSpec], selection: &[bool], horizon: u64) -> Result<u64> {
    if selection.len() != robots.len() {
        return Err(Error::SelectionMismatch { got: selection.len(), want: robots.len() });
    }
    let mut total = 0u64;
    for (robot, &selected) in robots.iter().zip(selection) {
        if !selected {
            continue;
        }
        let cycle = robot.cycle_time();
        if horizon == 0 || !horizon.is_multiple_of(cycle) {
            return Err(Error::NotCommonMultiple {
                id: robot.id.to_string(),
                cycle,
                horizon,
            });
        }
        total += robot.fly_slots * (horizon / cycle);
    }
    Ok(total)
}
