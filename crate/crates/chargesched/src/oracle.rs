//! Brute-force references: intentionally naive, obviously correct, and
//! loud when an instance is too big to enumerate exactly.

use crate::error::{Error, Result};
use crate::horizon::{checked_lcm, CandidateSet};
use crate::schedule::{for_each_charging_slot, RobotSpec};

/// Enumeration ceiling; oracles are exact or absent, never sampled.
pub const DEFAULT_CAP: u128 = 1_000_000;

fn check_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::OracleCap { size, cap })
    } else {
        Ok(())
    }
}

/// Walks every offset tuple, keeping the occupancy profile incrementally.
/// Calls `leaf(max_occupancy)` for each complete tuple.
fn for_each_offset_tuple(
    robots: &[RobotSpec],
    horizon: u64,
    mut leaf: impl FnMut(u32),
) {
    fn recurse(
        jobs: &[(u64, u64)],
        depth: usize,
        horizon: u64,
        occupancy: &mut Vec<u32>,
        leaf: &mut impl FnMut(u32),
    ) {
        if depth == jobs.len() {
            leaf(occupancy.iter().copied().max().unwrap_or(0));
            return;
        }
        let (c, cycle) = jobs[depth];
        for offset in 0..cycle {
            for_each_charging_slot(c, cycle, offset, horizon, |t| occupancy[t] += 1);
            recurse(jobs, depth + 1, horizon, occupancy, leaf);
            for_each_charging_slot(c, cycle, offset, horizon, |t| occupancy[t] -= 1);
        }
    }
    let jobs: Vec<(u64, u64)> =
        robots.iter().map(|r| (r.charge_slots, r.cycle_time())).collect();
    let mut occupancy = vec![0u32; horizon as usize];
    recurse(&jobs, 0, horizon, &mut occupancy, &mut leaf);
}

/// Exact minimum station count by exhaustive offset enumeration.
pub fn brute_min_stations(robots: &[RobotSpec], horizon: u64) -> Result<u64> {
    brute_min_stations_capped(robots, horizon, DEFAULT_CAP)
}

pub fn brute_min_stations_capped(
    robots: &[RobotSpec],
    horizon: u64,
    cap: u128,
) -> Result<u64> {
    let size: u128 = robots.iter().map(|r| r.cycle_time() as u128).product();
    check_cap(size, cap)?;
    if robots.is_empty() {
        return Ok(0);
    }
    let mut best = u32::MAX;
    for_each_offset_tuple(robots, horizon, |max_occupancy| {
        best = best.min(max_occupancy);
    });
    Ok(best as u64)
}

/// Exact maximum total flying time by enumerating every selection subset
/// and every offset tuple of the selected robots.
pub fn brute_max_flytime(robots: &[RobotSpec], stations: u64, horizon: u64) -> Result<u64> {
    brute_max_flytime_capped(robots, stations, horizon, DEFAULT_CAP)
}

pub fn brute_max_flytime_capped(
    robots: &[RobotSpec],
    stations: u64,
    horizon: u64,
    cap: u128,
) -> Result<u64> {
    let tuple_size: u128 = robots.iter().map(|r| r.cycle_time() as u128).product();
    let size = (1u128 << robots.len()) * tuple_size;
    check_cap(size, cap)?;
    let mut best = 0u64;
    for mask in 0u32..(1 << robots.len()) {
        let subset: Vec<RobotSpec> = robots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.clone())
            .collect();
        let value: u64 =
            subset.iter().map(|r| r.fly_slots * (horizon / r.cycle_time())).sum();
        if value <= best {
            continue;
        }
        let mut feasible = false;
        for_each_offset_tuple(&subset, horizon, |max_occupancy| {
            if max_occupancy as u64 <= stations {
                feasible = true;
            }
        });
        if feasible {
            best = value;
        }
    }
    Ok(best)
}

/// Exact minimum LCM over every candidate cycle-time choice.
pub fn brute_min_lcm(sets: &[CandidateSet]) -> Result<u64> {
    brute_min_lcm_capped(sets, DEFAULT_CAP)
}

pub fn brute_min_lcm_capped(sets: &[CandidateSet], cap: u128) -> Result<u64> {
    if sets.is_empty() {
        return Err(Error::EmptyInput("candidate sets"));
    }
    let size: u128 = sets.iter().map(|s| s.candidates.len() as u128).product();
    check_cap(size, cap)?;
    fn recurse(sets: &[CandidateSet], acc: u64, best: &mut Option<u64>) -> Result<()> {
        match sets.split_first() {
            None => {
                *best = Some(best.map_or(acc, |b: u64| b.min(acc)));
                Ok(())
            }
            Some((first, rest)) => {
                for &v in &first.candidates {
                    let next = checked_lcm(acc, v).ok_or(Error::HorizonOverflow)?;
                    recurse(rest, next, best)?;
                }
                Ok(())
            }
        }
    }
    let mut best = None;
    recurse(sets, 1, &mut best)?;
    best.ok_or(Error::EmptyCandidateInterval("<empty>".into()))
}
