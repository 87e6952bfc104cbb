//! Exact solvers for the two station-scheduling programs.
//!
//! Both programs are 0-1 integer programs over the robots' phase offsets;
//! the constraint matrix is never materialized because every row is
//! determined by `(c_i, T_i)` and modular arithmetic. `solve_min_stations`
//! iterates the station count upward from the density lower bound with a
//! depth-first packing search; `solve_max_flytime` wraps the same packing
//! search in branch-and-bound over the deployment selection. `export_model`
//! serializes either program in LP text format for external MILP solvers.

use crate::error::{Error, Result};
use crate::schedule::{charging_at, for_each_charging_slot, PhaseAssignment, RobotSpec};
use std::fmt::Write as _;

/// Tuning knobs for the exact searches.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Abort bound on slot-level work units; exceeding it yields
    /// [`Error::WorkBudgetExceeded`] instead of an open-ended run.
    pub work_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { work_budget: 2_000_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct MinStationsSolution {
    pub m_min: u64,
    /// One phase per robot, in input order.
    pub phases: Vec<PhaseAssignment>,
    pub horizon: u64,
}

#[derive(Debug, Clone)]
pub struct MaxFlytimeSolution {
    /// Deployment flags in input order.
    pub selection: Vec<bool>,
    /// Phases of the selected robots, in input order.
    pub phases: Vec<PhaseAssignment>,
    /// Total flying slots over `[0, horizon)`.
    pub objective: u64,
    pub stations: u64,
    pub horizon: u64,
}

fn check_horizon(robots: &[RobotSpec], horizon: u64) -> Result<()> {
    for robot in robots {
        let cycle = robot.cycle_time();
        if horizon == 0 || !horizon.is_multiple_of(cycle) {
            return Err(Error::NotCommonMultiple { id: robot.id.to_string(), cycle, horizon });
        }
    }
    Ok(())
}

/// `ceil(Σ c_i / T_i)` computed exactly via the common horizon.
fn density_lower_bound(robots: &[RobotSpec], horizon: u64) -> u64 {
    let charge_total: u64 =
        robots.iter().map(|r| r.charge_slots * (horizon / r.cycle_time())).sum();
    charge_total.div_ceil(horizon)
}

/// Depth-first packer: assigns offsets to robots (densest first) while the
/// running occupancy profile stays within the station budget.
struct Packer {
    /// (charge_slots, cycle) per robot, in search order.
    jobs: Vec<(u64, u64)>,
    horizon: u64,
    occupancy: Vec<u32>,
    work: u64,
    budget: u64,
}

impl Packer {
    /// `indices` selects and orders the robots to pack.
    fn new(robots: &[RobotSpec], indices: &[usize], horizon: u64, budget: u64) -> Self {
        let jobs = indices
            .iter()
            .map(|&i| (robots[i].charge_slots, robots[i].cycle_time()))
            .collect();
        Packer { jobs, horizon, occupancy: vec![0; horizon as usize], work: 0, budget }
    }

    fn spend(&mut self, units: u64) -> Result<()> {
        self.work += units;
        if self.work > self.budget {
            Err(Error::WorkBudgetExceeded { budget: self.budget, lower: 0, upper: 0 })
        } else {
            Ok(())
        }
    }

    fn fits(&mut self, job: usize, offset: u64, stations: u64) -> Result<bool> {
        let (c, cycle) = self.jobs[job];
        self.spend(c * (self.horizon / cycle))?;
        let mut ok = true;
        let occupancy = &mut self.occupancy;
        for_each_charging_slot(c, cycle, offset, self.horizon, |t| {
            if occupancy[t] as u64 >= stations {
                ok = false;
            }
        });
        Ok(ok)
    }

    fn apply(&mut self, job: usize, offset: u64, delta: i32) {
        let (c, cycle) = self.jobs[job];
        let occupancy = &mut self.occupancy;
        for_each_charging_slot(c, cycle, offset, self.horizon, |t| {
            occupancy[t] = (occupancy[t] as i32 + delta) as u32;
        });
    }

    /// Searches offsets for `jobs[depth..]`; the first robot is pinned to
    /// offset 0 (any feasible packing can be cyclically shifted onto it).
    fn pack_from(
        &mut self,
        depth: usize,
        stations: u64,
        offsets: &mut Vec<u64>,
    ) -> Result<bool> {
        if depth == self.jobs.len() {
            return Ok(true);
        }
        let cycle = self.jobs[depth].1;
        let last_offset = if depth == 0 { 0 } else { cycle - 1 };
        for offset in 0..=last_offset {
            if self.fits(depth, offset, stations)? {
                self.apply(depth, offset, 1);
                offsets.push(offset);
                if self.pack_from(depth + 1, stations, offsets)? {
                    return Ok(true);
                }
                offsets.pop();
                self.apply(depth, offset, -1);
            }
        }
        Ok(false)
    }

    fn pack(&mut self, stations: u64) -> Result<Option<Vec<u64>>> {
        if stations == 0 {
            return Ok(if self.jobs.is_empty() { Some(Vec::new()) } else { None });
        }
        self.occupancy.iter_mut().for_each(|c| *c = 0);
        let mut offsets = Vec::with_capacity(self.jobs.len());
        Ok(if self.pack_from(0, stations, &mut offsets)? { Some(offsets) } else { None })
    }
}

/// Robot indices sorted by decreasing charging density `c_i / T_i`,
/// ties by input order.
fn density_order(robots: &[RobotSpec], indices: &[usize]) -> Vec<usize> {
    let mut order = indices.to_vec();
    order.sort_by(|&a, &b| {
        // c_a/T_a > c_b/T_b  ⇔  c_a·T_b > c_b·T_a
        let lhs = robots[a].charge_slots * robots[b].cycle_time();
        let rhs = robots[b].charge_slots * robots[a].cycle_time();
        rhs.cmp(&lhs).then(a.cmp(&b))
    });
    order
}

/// Minimum station count with witnessing phases, certified by exhausting
/// every smaller station budget.
pub fn solve_min_stations(robots: &[RobotSpec], horizon: u64) -> Result<MinStationsSolution> {
    solve_min_stations_with(robots, horizon, &SolveOptions::default())
}

pub fn solve_min_stations_with(
    robots: &[RobotSpec],
    horizon: u64,
    options: &SolveOptions,
) -> Result<MinStationsSolution> {
    check_horizon(robots, horizon)?;
    if robots.is_empty() {
        return Ok(MinStationsSolution { m_min: 0, phases: Vec::new(), horizon });
    }
    let all: Vec<usize> = (0..robots.len()).collect();
    let order = density_order(robots, &all);
    let lower = density_lower_bound(robots, horizon).max(1);
    let mut packer = Packer::new(robots, &order, horizon, options.work_budget);
    for stations in lower..=robots.len() as u64 {
        match packer.pack(stations) {
            Ok(Some(offsets)) => {
                let mut phases: Vec<Option<PhaseAssignment>> = vec![None; robots.len()];
                for (&idx, &offset) in order.iter().zip(&offsets) {
                    phases[idx] = Some(PhaseAssignment::new(robots[idx].id.0.as_str(), offset));
                }
                return Ok(MinStationsSolution {
                    m_min: stations,
                    phases: phases.into_iter().map(|p| p.unwrap()).collect(),
                    horizon,
                });
            }
            Ok(None) => continue,
            Err(Error::WorkBudgetExceeded { budget, .. }) => {
                // everything below `stations` is proven infeasible
                return Err(Error::WorkBudgetExceeded {
                    budget,
                    lower: stations,
                    upper: robots.len() as u64,
                });
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("one station per robot is always feasible");
}

/// Maximum total flying time under a fixed station budget: branch-and-bound
/// over the deployment selection (highest-value robots first), with each
/// complete selection tested by the packing search.
pub fn solve_max_flytime(
    robots: &[RobotSpec],
    stations: u64,
    horizon: u64,
) -> Result<MaxFlytimeSolution> {
    solve_max_flytime_with(robots, stations, horizon, &SolveOptions::default())
}

pub fn solve_max_flytime_with(
    robots: &[RobotSpec],
    stations: u64,
    horizon: u64,
    options: &SolveOptions,
) -> Result<MaxFlytimeSolution> {
    check_horizon(robots, horizon)?;
    let n = robots.len();
    let values: Vec<u64> =
        robots.iter().map(|r| r.fly_slots * (horizon / r.cycle_time())).collect();

    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));
    let suffix_value: Vec<u64> = {
        let mut acc = vec![0u64; n + 1];
        for i in (0..n).rev() {
            acc[i] = acc[i + 1] + values[by_value[i]];
        }
        acc
    };

    struct Search<'a> {
        robots: &'a [RobotSpec],
        values: &'a [u64],
        by_value: &'a [usize],
        suffix_value: &'a [u64],
        stations: u64,
        horizon: u64,
        budget: u64,
        work_used: u64,
        best_value: u64,
        best_set: Vec<usize>,
        best_offsets: Vec<u64>,
    }

    impl Search<'_> {
        fn explore(&mut self, pos: usize, chosen: &mut Vec<usize>, value: u64) -> Result<()> {
            // the empty selection seeds best_value = 0, so this prune can
            // never cut off a strictly better selection
            if value + self.suffix_value[pos] <= self.best_value {
                return Ok(());
            }
            if pos == self.by_value.len() {
                if value <= self.best_value {
                    return Ok(());
                }
                let order = density_order(self.robots, chosen);
                let mut packer =
                    Packer::new(self.robots, &order, self.horizon, self.budget - self.work_used);
                let packed = match packer.pack(self.stations) {
                    Ok(p) => p,
                    Err(Error::WorkBudgetExceeded { budget, .. }) => {
                        return Err(Error::WorkBudgetExceeded {
                            budget,
                            lower: self.best_value,
                            upper: self.suffix_value[0],
                        })
                    }
                    Err(e) => return Err(e),
                };
                self.work_used += packer.work;
                if let Some(offsets) = packed {
                    self.best_value = value;
                    self.best_set = order;
                    self.best_offsets = offsets;
                }
                return Ok(());
            }
            let idx = self.by_value[pos];
            chosen.push(idx);
            self.explore(pos + 1, chosen, value + self.values[idx])?;
            chosen.pop();
            self.explore(pos + 1, chosen, value)
        }
    }

    let mut search = Search {
        robots,
        values: &values,
        by_value: &by_value,
        suffix_value: &suffix_value,
        stations,
        horizon,
        budget: options.work_budget,
        work_used: 0,
        best_value: 0,
        best_set: Vec::new(),
        best_offsets: Vec::new(),
    };
    // the empty selection is always feasible, so best starts at objective 0
    let mut chosen = Vec::new();
    search.explore(0, &mut chosen, 0)?;

    let mut selection = vec![false; n];
    let mut phase_by_idx: Vec<Option<PhaseAssignment>> = vec![None; n];
    for (&idx, &offset) in search.best_set.iter().zip(&search.best_offsets) {
        selection[idx] = true;
        phase_by_idx[idx] = Some(PhaseAssignment::new(robots[idx].id.0.as_str(), offset));
    }
    Ok(MaxFlytimeSolution {
        selection,
        phases: phase_by_idx.into_iter().flatten().collect(),
        objective: search.best_value,
        stations,
        horizon,
    })
}

/// Which program [`export_model`] serializes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportMode {
    MinStations,
    MaxFlytime { stations: u64 },
}

/// Emits the 0-1 program in LP text format. Binary variable `x_{i}_{s}`
/// selects offset `s` for robot `i` (input order); min-stations mode adds a
/// general integer `m` to minimize, max-flytime mode adds binary deployment
/// variables `u_{i}`. Rows appear one-hot first, then one capacity row per
/// slot `t` ascending.
pub fn export_model(robots: &[RobotSpec], mode: ExportMode, horizon: u64) -> Result<String> {
    check_horizon(robots, horizon)?;
    let mut out = String::new();
    if robots.is_empty() {
        let sense = match mode {
            ExportMode::MinStations => "Minimize",
            ExportMode::MaxFlytime { .. } => "Maximize",
        };
        out.push_str(sense);
        out.push_str("\n obj: 0\nSubject To\nEnd\n");
        return Ok(out);
    }

    match mode {
        ExportMode::MinStations => {
            out.push_str("Minimize\n obj: m\n");
        }
        ExportMode::MaxFlytime { .. } => {
            out.push_str("Maximize\n obj:");
            for (i, robot) in robots.iter().enumerate() {
                let value = robot.fly_slots * (horizon / robot.cycle_time());
                let sign = if i == 0 { "" } else { " +" };
                write!(out, "{sign} {value} u_{i}").unwrap();
            }
            out.push('\n');
        }
    }

    out.push_str("Subject To\n");
    for (i, robot) in robots.iter().enumerate() {
        write!(out, " onehot_{i}:").unwrap();
        for s in 0..robot.cycle_time() {
            let sign = if s == 0 { "" } else { " +" };
            write!(out, "{sign} x_{i}_{s}").unwrap();
        }
        match mode {
            ExportMode::MinStations => out.push_str(" = 1\n"),
            ExportMode::MaxFlytime { .. } => {
                writeln!(out, " - u_{i} = 0").unwrap();
            }
        }
    }
    for t in 0..horizon {
        write!(out, " cap_{t}:").unwrap();
        let mut first = true;
        for (i, robot) in robots.iter().enumerate() {
            let cycle = robot.cycle_time();
            for s in 0..cycle {
                if charging_at(robot.charge_slots, cycle, s, t) {
                    let sign = if first { "" } else { " +" };
                    write!(out, "{sign} x_{i}_{s}").unwrap();
                    first = false;
                }
            }
        }
        match mode {
            ExportMode::MinStations => out.push_str(" - m <= 0\n"),
            ExportMode::MaxFlytime { stations } => {
                writeln!(out, " <= {stations}").unwrap();
            }
        }
    }

    if let ExportMode::MinStations = mode {
        out.push_str("Bounds\n m >= 0\nGenerals\n m\n");
    }
    out.push_str("Binaries\n");
    for (i, robot) in robots.iter().enumerate() {
        for s in 0..robot.cycle_time() {
            write!(out, " x_{i}_{s}").unwrap();
        }
    }
    if let ExportMode::MaxFlytime { .. } = mode {
        for i in 0..robots.len() {
            write!(out, " u_{i}").unwrap();
        }
    }
    out.push_str("\nEnd\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{validate_schedule, Schedule};

    fn fleet(specs: &[(u64, u64)]) -> Vec<RobotSpec> {
        specs
            .iter()
            .enumerate()
            .map(|(i, &(c, f))| RobotSpec::new(format!("r{i}").as_str(), c, f).unwrap())
            .collect()
    }

    fn assert_valid(robots: &[RobotSpec], phases: &[PhaseAssignment], m: u64, horizon: u64) {
        let schedule = Schedule {
            robots: robots.to_vec(),
            phases: phases.to_vec(),
            stations: m,
            horizon,
        };
        assert!(validate_schedule(&schedule).is_valid());
    }

    #[test]
    fn min_stations_examples() {
        let two = fleet(&[(1, 1), (1, 1)]);
        let sol = solve_min_stations(&two, 2).unwrap();
        assert_eq!(sol.m_min, 1);
        assert_eq!(
            sol.phases.iter().map(|p| p.offset).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_valid(&two, &sol.phases, sol.m_min, 2);

        let three = fleet(&[(1, 1), (1, 3), (1, 3)]);
        let sol = solve_min_stations(&three, 4).unwrap();
        assert_eq!(sol.m_min, 1);
        assert_valid(&three, &sol.phases, 1, 4);

        let single = fleet(&[(3, 4)]);
        let sol = solve_min_stations(&single, 7).unwrap();
        assert_eq!(sol.m_min, 1);

        // perfect staggering: n robots each (c=1, f=n-1)
        for n in 2u64..=6 {
            let robots = fleet(&vec![(1, n - 1); n as usize]);
            let sol = solve_min_stations(&robots, n).unwrap();
            assert_eq!(sol.m_min, 1);
            assert_valid(&robots, &sol.phases, 1, n);
        }
    }

    #[test]
    fn min_stations_empty_fleet() {
        let sol = solve_min_stations(&[], 4).unwrap();
        assert_eq!(sol.m_min, 0);
    }

    #[test]
    fn min_stations_checks_horizon() {
        let robots = fleet(&[(1, 1)]);
        assert!(matches!(
            solve_min_stations(&robots, 3),
            Err(Error::NotCommonMultiple { .. })
        ));
    }

    #[test]
    fn min_stations_budget_error_carries_bounds() {
        let robots = fleet(&[(2, 1), (2, 1), (2, 1)]);
        let tight = SolveOptions { work_budget: 1 };
        match solve_min_stations_with(&robots, 3, &tight) {
            Err(Error::WorkBudgetExceeded { lower, upper, .. }) => {
                assert!(lower >= 2); // density bound is ceil(6/3) = 2
                assert_eq!(upper, 3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn shift_invariance_of_feasible_phases() {
        let robots = fleet(&[(1, 2), (2, 4), (1, 5)]);
        let horizon = 6;
        let sol = solve_min_stations(&robots, horizon).unwrap();
        for shift in 0..horizon {
            let shifted: Vec<PhaseAssignment> = sol
                .phases
                .iter()
                .zip(&robots)
                .map(|(p, r)| {
                    PhaseAssignment::new(r.id.0.as_str(), (p.offset + shift) % r.cycle_time())
                })
                .collect();
            assert_valid(&robots, &shifted, sol.m_min, horizon);
        }
    }

    #[test]
    fn max_flytime_examples() {
        let three = fleet(&[(1, 1), (1, 1), (1, 1)]);
        let sol = solve_max_flytime(&three, 1, 2).unwrap();
        assert_eq!(sol.objective, 2);
        assert_eq!(sol.selection.iter().filter(|&&u| u).count(), 2);
        assert_valid(&three, &sol.phases, 1, 2);

        let zero = solve_max_flytime(&three, 0, 2).unwrap();
        assert_eq!(zero.objective, 0);
        assert!(zero.selection.iter().all(|&u| !u));

        // at m = m_min the whole fleet flies
        let mixed = fleet(&[(1, 2), (2, 1), (1, 5)]);
        let horizon = 6;
        let m_min = solve_min_stations(&mixed, horizon).unwrap().m_min;
        let sol = solve_max_flytime(&mixed, m_min, horizon).unwrap();
        assert!(sol.selection.iter().all(|&u| u));
        let full: u64 = mixed.iter().map(|r| r.fly_slots * (horizon / r.cycle_time())).sum();
        assert_eq!(sol.objective, full);
    }

    #[test]
    fn export_min_stations_shape() {
        let robots = fleet(&[(1, 1), (1, 1)]);
        let text = export_model(&robots, ExportMode::MinStations, 2).unwrap();
        assert_eq!(text.matches("onehot_").count(), 2);
        assert_eq!(text.matches("cap_").count(), 2);
        // 4 binary x variables + the integer m
        let binaries = text.split("Binaries\n").nth(1).unwrap();
        assert_eq!(binaries.matches("x_").count(), 4);
        assert!(text.contains("Generals\n m\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn export_counts_three_robots() {
        let robots = fleet(&[(1, 1), (1, 3), (1, 3)]);
        let text = export_model(&robots, ExportMode::MinStations, 4).unwrap();
        assert_eq!(text.matches("onehot_").count(), 3);
        assert_eq!(text.matches("cap_").count(), 4);
        let binaries = text.split("Binaries\n").nth(1).unwrap();
        assert_eq!(binaries.matches("x_").count(), 10);
    }

    #[test]
    fn export_empty_fleet() {
        let text = export_model(&[], ExportMode::MinStations, 1).unwrap();
        assert!(text.contains("obj: 0"));
        assert!(!text.contains("cap_"));
        assert!(!text.contains("onehot_"));
    }

    #[test]
    fn export_max_flytime_has_selection_vars() {
        let robots = fleet(&[(1, 1), (1, 3)]);
        let text =
            export_model(&robots, ExportMode::MaxFlytime { stations: 1 }, 4).unwrap();
        assert!(text.starts_with("Maximize"));
        assert!(text.contains("u_0"));
        assert!(text.contains("- u_1 = 0"));
        assert!(text.contains("<= 1"));
    }

    #[test]
    fn export_is_deterministic() {
        let robots = fleet(&[(2, 3), (1, 4)]);
        let a = export_model(&robots, ExportMode::MinStations, 5).unwrap();
        let b = export_model(&robots, ExportMode::MinStations, 5).unwrap();
        assert_eq!(a, b);
    }
}
