//! Scheduling-horizon computation and reduction.
//!
//! The joint schedule repeats every `LCM(T_1, ..., T_n)` slots. When the
//! cycle times are near co-prime that LCM explodes, so each robot may give
//! up part of its flying time (bounded by its safety-margin fraction ε) to
//! shift its cycle time onto a value with a smaller fleet-wide LCM. The
//! choice is made by a label-setting shortest-path search over a layered
//! graph whose path cost is the LCM of the visited cycle times.

use crate::error::{Error, Result};
use crate::schedule::{RobotId, RobotSpec};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub(crate) fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / num_integer::gcd(a, b)).checked_mul(b)
}

/// LCM of the given cycle times, with overflow reported rather than wrapped.
pub fn scheduling_horizon(cycle_times: &[u64]) -> Result<u64> {
    if cycle_times.is_empty() {
        return Err(Error::EmptyInput("cycle_times"));
    }
    let mut acc = 1u64;
    for &t in cycle_times {
        acc = checked_lcm(acc, t).ok_or(Error::HorizonOverflow)?;
    }
    Ok(acc)
}

/// The admissible cycle times of one robot, ascending. The robot's original
/// cycle time is always the last element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub robot_id: RobotId,
    pub candidates: Vec<u64>,
}

/// All integers `V` with `max(ceil((1-ε)·T_i), c_i+1) <= V <= T_i`.
pub fn candidate_set(robot: &RobotSpec) -> Result<CandidateSet> {
    let cycle = robot.cycle_time();
    // V >= (1-ε)T  ⇔  T - V <= floor(ε·T); the nudge absorbs f64 rounding
    // in the product (ε is a fraction like 0.1 with no exact binary form).
    let max_safety = (robot.epsilon * cycle as f64 + 1e-9).floor() as u64;
    let lower = (cycle - max_safety.min(cycle)).max(robot.charge_slots + 1);
    if lower > cycle {
        return Err(Error::EmptyCandidateInterval(robot.id.to_string()));
    }
    Ok(CandidateSet { robot_id: robot.id.clone(), candidates: (lower..=cycle).collect() })
}

/// One robot's entry in a reduced-horizon plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanEntry {
    pub robot_id: RobotId,
    /// Chosen cycle time `T_i^c`.
    pub cycle: u64,
    /// Reduced flying time `f_i^new = T_i^c - c_i`.
    pub fly_slots: u64,
    /// Reserve slots `f_i - f_i^new`.
    pub safety_slots: u64,
}

/// Chosen cycle times and the resulting scheduling horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HorizonPlan {
    pub entries: Vec<PlanEntry>,
    pub horizon: u64,
}

impl HorizonPlan {
    /// Robot specs with the reduced flying times substituted in.
    pub fn reduced_robots(&self, robots: &[RobotSpec]) -> Result<Vec<RobotSpec>> {
        self.entries
            .iter()
            .zip(robots)
            .map(|(entry, robot)| {
                RobotSpec::with_epsilon(
                    robot.id.0.as_str(),
                    robot.charge_slots,
                    entry.fly_slots,
                    robot.epsilon,
                )
            })
            .collect()
    }
}

/// Label-setting LCM-cost search over the layered candidate graph.
///
/// Pseudo source and target vertices carry value 1; layer `i` holds robot
/// `i`'s candidates, fully connected to the adjacent layers. A path's cost
/// is the LCM of its vertex values, and the search settles each vertex at
/// its best label seen so far. LCM costs do not satisfy the dominance
/// property ordinary shortest-path relies on, so the result is a good
/// admissible choice rather than a certified optimum; `oracle::brute_min_lcm`
/// is the exact reference. If the search lands on a choice worse than
/// keeping every original cycle time, the original choice is returned.
///
/// Ties in the queue break by (cost, layer, candidate value), so the result
/// is deterministic across platforms.
pub fn dijkstra_lcm(sets: &[CandidateSet]) -> Result<(Vec<u64>, u64)> {
    if sets.is_empty() {
        return Err(Error::EmptyInput("candidate sets"));
    }
    for set in sets {
        if set.candidates.is_empty() {
            return Err(Error::EmptyCandidateInterval(set.robot_id.to_string()));
        }
    }

    // Vertex layout: 0 = source, then each layer's candidates, last = target.
    let n_layers = sets.len();
    let mut layer_start = Vec::with_capacity(n_layers);
    let mut values = vec![1u64]; // source
    let mut layers = vec![usize::MAX]; // pseudo layer for tie-breaking
    for (li, set) in sets.iter().enumerate() {
        layer_start.push(values.len());
        for &v in &set.candidates {
            values.push(v);
            layers.push(li);
        }
    }
    let target = values.len();
    values.push(1);
    layers.push(n_layers);
    let n_vertices = values.len();

    let successors = |v: usize| -> (usize, usize) {
        // half-open vertex range of the next layer (or the target)
        if v == 0 {
            (layer_start[0], layer_start.get(1).copied().unwrap_or(target))
        } else {
            let li = layers[v];
            if li + 1 == n_layers {
                (target, target + 1)
            } else {
                let start = layer_start[li + 1];
                let end = layer_start.get(li + 2).copied().unwrap_or(target);
                (start, end)
            }
        }
    };

    let mut cost = vec![u64::MAX; n_vertices];
    let mut visited = vec![false; n_vertices];
    let mut pred = vec![usize::MAX; n_vertices];
    let mut pq = BinaryHeap::new();
    cost[0] = 1;
    // key: (cost, layer+1 so the source sorts first, value, vertex)
    pq.push(Reverse((1u64, 0usize, 1u64, 0usize)));

    let mut settled: Option<u64> = None;
    while let Some(Reverse((c, _, _, u))) = pq.pop() {
        if visited[u] {
            continue;
        }
        if u == target {
            settled = Some(c);
            break;
        }
        visited[u] = true;
        let (lo, hi) = successors(u);
        for v in lo..hi {
            if let Some(new_cost) = checked_lcm(c, values[v]) {
                if new_cost < cost[v] {
                    cost[v] = new_cost;
                    pred[v] = u;
                    pq.push(Reverse((new_cost, layers[v].wrapping_add(1), values[v], v)));
                }
            }
        }
    }

    let originals: Vec<u64> = sets.iter().map(|s| *s.candidates.last().unwrap()).collect();
    let original_horizon = scheduling_horizon(&originals)?;

    let settled = match settled {
        Some(c) => c,
        // every path overflowed; fall back to the unreduced choice
        None => return Ok((originals, original_horizon)),
    };

    if settled >= original_horizon {
        return Ok((originals, original_horizon));
    }

    let mut chosen = Vec::with_capacity(n_layers);
    let mut u = pred[target];
    while u != 0 {
        chosen.push(values[u]);
        u = pred[u];
    }
    chosen.reverse();
    debug_assert_eq!(chosen.len(), n_layers);
    debug_assert_eq!(scheduling_horizon(&chosen)?, settled);
    Ok((chosen, settled))
}

/// Builds the candidate sets for a fleet, runs the LCM search, and packages
/// the chosen cycle times as a [`HorizonPlan`].
pub fn reduce_horizon(robots: &[RobotSpec]) -> Result<HorizonPlan> {
    if robots.is_empty() {
        return Err(Error::EmptyInput("robots"));
    }
    let sets: Vec<CandidateSet> = robots.iter().map(candidate_set).collect::<Result<_>>()?;
    let (chosen, horizon) = dijkstra_lcm(&sets)?;
    let entries = robots
        .iter()
        .zip(&chosen)
        .map(|(robot, &cycle)| PlanEntry {
            robot_id: robot.id.clone(),
            cycle,
            fly_slots: cycle - robot.charge_slots,
            safety_slots: robot.cycle_time() - cycle,
        })
        .collect();
    Ok(HorizonPlan { entries, horizon })
}
