//! Delay management: re-phasing a tardy robot without touching anyone else.
//!
//! All other robots keep their schedules, so the tardy robot faces a fixed
//! periodic residual-capacity profile. Its new phase must charge only in
//! slots with residual capacity, and among those phases we take the one
//! whose first charge start is earliest at or after the arrival slot.

use crate::error::{Error, Result};
use crate::horizon::scheduling_horizon;
use crate::schedule::{
    charging_at, OccupancyProfile, PhaseAssignment, RobotId, RobotSpec,
};
use serde::{Deserialize, Serialize};

/// The tardy robot's new phase and the station-side wait it incurs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplanResult {
    pub new_offset: u64,
    /// Absolute slot at which charging begins: `(new_offset + charge_start) mod T_k = 0`.
    pub charge_start: u64,
    pub wait_slots: u64,
}

/// Stations left free per slot once every robot except `exclude` is placed:
/// `counts[t] = m - Σ_{i≠k} z_i(t)`.
pub fn residual_capacity(
    robots: &[RobotSpec],
    phases: &[PhaseAssignment],
    exclude: &RobotId,
    stations: u64,
    horizon: u64,
) -> Result<OccupancyProfile> {
    if horizon == 0 {
        return Err(Error::EmptyInput("horizon must be >= 1"));
    }
    let mut counts = vec![0u32; horizon as usize];
    for phase in phases {
        if &phase.robot_id == exclude {
            continue;
        }
        let robot = robots
            .iter()
            .find(|r| r.id == phase.robot_id)
            .ok_or_else(|| Error::UnknownRobot(phase.robot_id.to_string()))?;
        let cycle = robot.cycle_time();
        if phase.offset >= cycle {
            return Err(Error::OffsetOutOfRange {
                id: robot.id.to_string(),
                offset: phase.offset,
                cycle,
            });
        }
        for t in 0..horizon {
            if charging_at(robot.charge_slots, cycle, phase.offset, t) {
                counts[t as usize] += 1;
            }
        }
    }
    for (t, count) in counts.iter_mut().enumerate() {
        if (*count as u64) > stations {
            return Err(Error::InfeasibleResidual { slot: t as u64 });
        }
        *count = (stations - *count as u64) as u32;
    }
    Ok(OccupancyProfile { counts })
}

/// Finds the phase for robot `k` that fits the residual capacity and starts
/// charging as early as possible at or after `arrival`. Ties in the charge
/// start break toward the smaller offset. Any phase entry for `k` in
/// `phases` is ignored (it is the commitment being replaced).
pub fn replan_delayed(
    robots: &[RobotSpec],
    phases: &[PhaseAssignment],
    stations: u64,
    k: &RobotId,
    arrival: u64,
) -> Result<ReplanResult> {
    let robot = robots
        .iter()
        .find(|r| &r.id == k)
        .ok_or_else(|| Error::UnknownRobot(k.to_string()))?;
    let horizon =
        scheduling_horizon(&robots.iter().map(|r| r.cycle_time()).collect::<Vec<_>>())?;
    let residual = residual_capacity(robots, phases, k, stations, horizon)?;

    let cycle = robot.cycle_time();
    let mut best: Option<ReplanResult> = None;
    for offset in 0..cycle {
        let feasible = (0..horizon).all(|t| {
            !charging_at(robot.charge_slots, cycle, offset, t)
                || residual.counts[t as usize] >= 1
        });
        if !feasible {
            continue;
        }
        // earliest t_c >= arrival with (offset + t_c) ≡ 0 (mod cycle)
        let charge_start = arrival + (cycle - (offset + arrival) % cycle) % cycle;
        let candidate =
            ReplanResult { new_offset: offset, charge_start, wait_slots: charge_start - arrival };
        if best.as_ref().is_none_or(|b| candidate.charge_start < b.charge_start) {
            best = Some(candidate);
        }
    }
    best.ok_or_else(|| Error::ReplanInfeasible(k.to_string()))
}
