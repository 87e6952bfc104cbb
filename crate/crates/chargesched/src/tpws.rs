//! Thrift Price Window Scheduling baseline.
//!
//! Rounds each robot's charging time up and cycle time down to powers of
//! two, then first-fit packs the rounded jobs onto machines at offsets
//! aligned to the job length. Used solely as a station-count comparator
//! for the exact solver; correctness of every placement is guaranteed by
//! the exact periodic-conflict test.

use crate::error::{Error, Result};
use crate::schedule::{RobotId, RobotSpec};

/// A robot after power-of-two rounding: charge `length` slots every `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedJob {
    pub robot_id: RobotId,
    /// `2^ceil(log2 c_i)`, clamped to `window` when rounding overshoots.
    pub length: u64,
    /// `2^floor(log2 T_i)`.
    pub window: u64,
    /// True when the rounded length filled the whole window.
    pub full_machine: bool,
}

fn prev_power_of_two(x: u64) -> u64 {
    debug_assert!(x >= 1);
    1 << (63 - x.leading_zeros())
}

/// Rounds every robot per the TPWS rule. Jobs whose rounded length exceeds
/// the rounded window collapse to full-machine jobs.
pub fn round_instance(robots: &[RobotSpec]) -> Vec<RoundedJob> {
    robots
        .iter()
        .map(|robot| {
            let window = prev_power_of_two(robot.cycle_time());
            let raw_length = robot.charge_slots.next_power_of_two();
            let full_machine = raw_length >= window;
            RoundedJob {
                robot_id: robot.id.clone(),
                length: raw_length.min(window),
                window,
                full_machine,
            }
        })
        .collect()
}

/// Exact periodic-overlap test for two placed jobs sharing a machine.
///
/// With power-of-two windows the smaller window divides the larger, so the
/// pair repeats every `w = min(window_a, window_b)` slots, and aligned
/// offsets keep both intervals from wrapping modulo `w`.
pub fn conflict(a: &RoundedJob, offset_a: u64, b: &RoundedJob, offset_b: u64) -> Result<bool> {
    for (job, offset) in [(a, offset_a), (b, offset_b)] {
        if offset % job.length != 0 || offset >= job.window {
            return Err(Error::MisalignedOffset { offset, length: job.length });
        }
    }
    let w = a.window.min(b.window);
    let ia = offset_a % w;
    let ib = offset_b % w;
    Ok(ia.max(ib) < (ia + a.length).min(ib + b.length))
}

/// One job placed on one machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineAssignment {
    pub machine_index: usize,
    pub robot_id: RobotId,
    pub offset: u64,
}

/// First-fit packing of rounded jobs: jobs sorted by increasing window then
/// decreasing length, offsets tried in ascending multiples of the length,
/// new machine opened when nothing fits.
pub fn schedule_tpws(jobs: &[RoundedJob]) -> (usize, Vec<MachineAssignment>) {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&i| (jobs[i].window, std::cmp::Reverse(jobs[i].length), i));

    let mut machines: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut assignments = Vec::with_capacity(jobs.len());
    for &ji in &order {
        let job = &jobs[ji];
        let mut placed = false;
        'machines: for (mi, machine) in machines.iter_mut().enumerate() {
            let mut offset = 0;
            while offset < job.window {
                let clash = machine
                    .iter()
                    .any(|&(other, o)| conflict(job, offset, &jobs[other], o).unwrap());
                if !clash {
                    machine.push((ji, offset));
                    assignments.push(MachineAssignment {
                        machine_index: mi,
                        robot_id: job.robot_id.clone(),
                        offset,
                    });
                    placed = true;
                    break 'machines;
                }
                offset += job.length;
            }
        }
        if !placed {
            machines.push(vec![(ji, 0)]);
            assignments.push(MachineAssignment {
                machine_index: machines.len() - 1,
                robot_id: job.robot_id.clone(),
                offset: 0,
            });
        }
    }
    (machines.len(), assignments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horizon::scheduling_horizon;

    fn job(length: u64, window: u64) -> RoundedJob {
        // id encodes the shape so lookups by id find an equivalent job
        RoundedJob {
            robot_id: format!("{length}x{window}").as_str().into(),
            length,
            window,
            full_machine: length == window,
        }
    }

    #[test]
    fn rounding_examples() {
        let robots = vec![
            RobotSpec::new("a", 3, 7).unwrap(),  // c=3, T=10
            RobotSpec::new("b", 4, 4).unwrap(),  // c=4, T=8
            RobotSpec::new("c", 5, 4).unwrap(),  // c=5, T=9
        ];
        let jobs = round_instance(&robots);
        assert_eq!((jobs[0].length, jobs[0].window), (4, 8));
        assert!(!jobs[0].full_machine);
        assert_eq!((jobs[1].length, jobs[1].window), (4, 8));
        assert_eq!((jobs[2].length, jobs[2].window), (8, 8));
        assert!(jobs[2].full_machine);
    }

    /// Slot-enumeration reference for the closed-form conflict test.
    fn conflict_by_enumeration(a: &RoundedJob, oa: u64, b: &RoundedJob, ob: u64) -> bool {
        let span = scheduling_horizon(&[a.window, b.window]).unwrap();
        (0..span).any(|t| {
            let in_a = (t + a.window - oa % a.window) % a.window < a.length;
            let in_b = (t + b.window - ob % b.window) % b.window < b.length;
            in_a && in_b
        })
    }

    #[test]
    fn conflict_examples() {
        assert!(conflict(&job(1, 2), 0, &job(1, 4), 2).unwrap());
        assert!(!conflict(&job(1, 2), 0, &job(1, 4), 1).unwrap());
        assert!(conflict(&job(4, 4), 0, &job(1, 4), 3).unwrap());
        assert!(matches!(
            conflict(&job(2, 4), 1, &job(1, 4), 0),
            Err(Error::MisalignedOffset { .. })
        ));
    }

    #[test]
    fn conflict_matches_enumeration() {
        let shapes = [(1u64, 2u64), (1, 4), (2, 4), (1, 8), (2, 8), (4, 8), (8, 8)];
        for &(la, wa) in &shapes {
            for &(lb, wb) in &shapes {
                let a = job(la, wa);
                let b = job(lb, wb);
                let mut oa = 0;
                while oa < wa {
                    let mut ob = 0;
                    while ob < wb {
                        assert_eq!(
                            conflict(&a, oa, &b, ob).unwrap(),
                            conflict_by_enumeration(&a, oa, &b, ob),
                            "jobs ({la},{wa})@{oa} vs ({lb},{wb})@{ob}"
                        );
                        ob += lb;
                    }
                    oa += la;
                }
            }
        }
    }

    fn verify_no_double_occupancy(jobs: &[RoundedJob], assignments: &[MachineAssignment]) {
        let machine_count =
            assignments.iter().map(|a| a.machine_index).max().map_or(0, |m| m + 1);
        for mi in 0..machine_count {
            let on_machine: Vec<(&RoundedJob, u64)> = assignments
                .iter()
                .filter(|a| a.machine_index == mi)
                .map(|a| {
                    let job = jobs.iter().find(|j| j.robot_id == a.robot_id).unwrap();
                    (job, a.offset)
                })
                .collect();
            let windows: Vec<u64> = on_machine.iter().map(|(j, _)| j.window).collect();
            let span = scheduling_horizon(&windows).unwrap();
            for t in 0..span {
                let occupied = on_machine
                    .iter()
                    .filter(|(j, o)| (t + j.window - o % j.window) % j.window < j.length)
                    .count();
                assert!(occupied <= 1, "machine {mi} double-booked at slot {t}");
            }
        }
    }

    #[test]
    fn schedule_examples() {
        let (count, assignments) =
            schedule_tpws(&[job(1, 2), job(1, 4), job(1, 4)]);
        assert_eq!(count, 1);
        assert_eq!(
            assignments.iter().map(|a| a.offset).collect::<Vec<_>>(),
            vec![0, 1, 3]
        );

        let (count, _) = schedule_tpws(&[job(2, 2), job(2, 2)]);
        assert_eq!(count, 2);

        // two robots (c=3, T=10) round to (4, 8) and share one machine
        let robots =
            vec![RobotSpec::new("a", 3, 7).unwrap(), RobotSpec::new("b", 3, 7).unwrap()];
        let jobs = round_instance(&robots);
        let (count, assignments) = schedule_tpws(&jobs);
        assert_eq!(count, 1);
        assert_eq!(
            assignments.iter().map(|a| a.offset).collect::<Vec<_>>(),
            vec![0, 4]
        );
        verify_no_double_occupancy(&jobs, &assignments);
    }

    #[test]
    fn schedule_respects_density_bound_and_verifies() {
        let cases: Vec<Vec<RoundedJob>> = vec![
            vec![job(1, 2), job(2, 4), job(1, 8), job(4, 8)],
            vec![job(2, 8), job(2, 8), job(2, 8), job(2, 8), job(1, 2)],
            vec![job(8, 8), job(1, 2), job(1, 2)],
        ];
        for jobs in cases {
            let (count, assignments) = schedule_tpws(&jobs);
            verify_no_double_occupancy(&jobs, &assignments);
            let total: f64 =
                jobs.iter().map(|j| j.length as f64 / j.window as f64).sum();
            assert!(count as f64 >= total.ceil() - 1e-9);
        }
    }
}
