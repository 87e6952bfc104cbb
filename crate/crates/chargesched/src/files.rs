//! JSON interchange formats for fleets and schedules.

use crate::error::{Error, Result};
use crate::schedule::{PhaseAssignment, RobotId, RobotSpec, Schedule};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

fn default_slot_minutes() -> f64 {
    1.0
}

/// Fleet description file. `slot_minutes` is the wall-clock duration of one
/// slot and is carried as metadata only; all computation is in slots.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FleetFile {
    #[serde(default = "default_slot_minutes")]
    pub slot_minutes: f64,
    pub robots: Vec<RobotSpec>,
}

impl FleetFile {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let fleet: FleetFile = serde_json::from_slice(bytes).map_err(|e| Error::InvalidSpec {
            id: "<fleet>".into(),
            reason: e.to_string(),
        })?;
        fleet.validate()?;
        Ok(fleet)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slot_minutes.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidSpec {
                id: "<fleet>".into(),
                reason: "slot_minutes must be positive".into(),
            });
        }
        let mut seen = HashSet::new();
        for robot in &self.robots {
            robot.validate()?;
            if !seen.insert(&robot.id) {
                return Err(Error::InvalidSpec {
                    id: robot.id.to_string(),
                    reason: "duplicate robot id".into(),
                });
            }
        }
        Ok(())
    }
}

/// One deployed robot's row in a schedule file. `cycle` and
/// `fly_slots_effective` reflect any horizon reduction; `safety_slots` is
/// the flying time given up for it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub id: RobotId,
    pub offset: u64,
    pub cycle: u64,
    pub charge_slots: u64,
    pub fly_slots_effective: u64,
    pub safety_slots: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    pub fleet_hash: String,
    pub solver_version: String,
}

/// Solver output file: schedule plus enough context to re-validate it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub horizon: u64,
    pub stations: u64,
    pub assignments: Vec<AssignmentEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected: Option<Vec<RobotId>>,
    /// Validation verdict recorded at emission time.
    pub valid: bool,
    pub provenance: Provenance,
}

impl ScheduleFile {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_slice(bytes).map_err(|e| Error::InvalidSpec {
            id: "<schedule>".into(),
            reason: e.to_string(),
        })?;
        for entry in &file.assignments {
            if entry.cycle != entry.charge_slots + entry.fly_slots_effective {
                return Err(Error::InvalidSpec {
                    id: entry.id.to_string(),
                    reason: "cycle != charge_slots + fly_slots_effective".into(),
                });
            }
        }
        Ok(file)
    }

    /// Reconstructs the in-memory schedule (with effective flying times).
    pub fn to_schedule(&self) -> Result<Schedule> {
        let robots: Vec<RobotSpec> = self
            .assignments
            .iter()
            .map(|e| RobotSpec::new(e.id.0.as_str(), e.charge_slots, e.fly_slots_effective))
            .collect::<Result<_>>()?;
        let phases: Vec<PhaseAssignment> = self
            .assignments
            .iter()
            .map(|e| PhaseAssignment::new(e.id.0.as_str(), e.offset))
            .collect();
        Ok(Schedule { robots, phases, stations: self.stations, horizon: self.horizon })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schedule serializes");
        s.push('\n');
        s
    }
}
