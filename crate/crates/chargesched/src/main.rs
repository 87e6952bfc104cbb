//! Command-line front end: fleet ingestion, solver invocation, schedule
//! emission, Gantt rendering, and the exact-solver-vs-TPWS benchmark harness.
//!
//! Exit codes: 0 success, 2 schema/input error, 3 solver resource limit.

use chargesched::error::Error;
use chargesched::files::{AssignmentEntry, FleetFile, Provenance, ScheduleFile};
use chargesched::horizon::{reduce_horizon, scheduling_horizon, HorizonPlan};
use chargesched::instances::{generate_fleet, BenchMode};
use chargesched::optimizer::{solve_max_flytime, solve_min_stations};
use chargesched::render::{gantt_ascii, gantt_svg};
use chargesched::replan::replan_delayed;
use chargesched::schedule::{validate_schedule, RobotSpec};
use chargesched::tpws::{round_instance, schedule_tpws};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "chargesched", version, about = "Periodic recharge scheduling for robot fleets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the number of charging stations for the whole fleet
    MinStations {
        /// Fleet JSON file, or `-` for stdin
        fleet: String,
        /// Shrink the scheduling horizon using per-robot safety margins
        #[arg(long)]
        reduce_horizon: bool,
        /// Write the schedule JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select and schedule robots to maximize total flying time
    MaxFlytime {
        fleet: String,
        /// Station budget
        #[arg(long)]
        stations: u64,
        #[arg(long)]
        reduce_horizon: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the reduced-horizon plan for a fleet
    ReduceHorizon { fleet: String },
    /// Re-phase a delayed robot within an existing schedule
    Replan {
        /// Schedule JSON file, or `-` for stdin
        schedule: String,
        #[arg(long)]
        robot: String,
        /// Absolute slot at which the robot actually arrives
        #[arg(long)]
        arrival: u64,
    },
    /// Re-validate a schedule file
    Validate { schedule: String },
    /// Render a schedule as a Gantt chart
    Gantt {
        schedule: String,
        #[arg(long, value_enum, default_value_t = GanttFormat::Ascii)]
        format: GanttFormat,
    },
    /// Benchmark the exact solver against the TPWS baseline on seeded instances
    Bench {
        #[arg(long, value_enum)]
        mode: BenchModeArg,
        #[arg(long)]
        robots: usize,
        #[arg(long)]
        seed: u64,
        /// Number of consecutive seeds to run
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GanttFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchModeArg {
    Pow2,
    Perturbed,
}

impl From<BenchModeArg> for BenchMode {
    fn from(mode: BenchModeArg) -> Self {
        match mode {
            BenchModeArg::Pow2 => BenchMode::Pow2,
            BenchModeArg::Perturbed => BenchMode::Perturbed,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::WorkBudgetExceeded { .. } | Error::OracleCap { .. } => 3,
            _ => 2,
        };
        Failure { code, message: err.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = run(cli.command) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn read_input(path: &str) -> CliResult<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| input_error(format!("reading {path}: {e}")))
    }
}

fn load_fleet(path: &str) -> CliResult<(FleetFile, String)> {
    let bytes = read_input(path)?;
    let fleet = FleetFile::from_json(&bytes)?;
    let hash = format!("{:x}", Sha256::digest(&bytes));
    Ok((fleet, hash))
}

fn load_schedule(path: &str) -> CliResult<ScheduleFile> {
    Ok(ScheduleFile::from_json(&read_input(path)?)?)
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_error(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Effective specs and plan after optional horizon reduction.
fn effective_fleet(
    robots: &[RobotSpec],
    reduce: bool,
) -> CliResult<(Vec<RobotSpec>, u64, Option<HorizonPlan>)> {
    if reduce {
        let plan = reduce_horizon(robots)?;
        let reduced = plan.reduced_robots(robots)?;
        Ok((reduced, plan.horizon, Some(plan)))
    } else {
        let cycles: Vec<u64> = robots.iter().map(|r| r.cycle_time()).collect();
        let horizon = scheduling_horizon(&cycles)?;
        Ok((robots.to_vec(), horizon, None))
    }
}

fn assignment_entries(
    effective: &[RobotSpec],
    plan: Option<&HorizonPlan>,
    phases: &[chargesched::PhaseAssignment],
) -> Vec<AssignmentEntry> {
    phases
        .iter()
        .map(|phase| {
            let (idx, robot) = effective
                .iter()
                .enumerate()
                .find(|(_, r)| r.id == phase.robot_id)
                .expect("phase robots come from the fleet");
            let safety_slots = plan.map_or(0, |p| p.entries[idx].safety_slots);
            AssignmentEntry {
                id: robot.id.clone(),
                offset: phase.offset,
                cycle: robot.cycle_time(),
                charge_slots: robot.charge_slots,
                fly_slots_effective: robot.fly_slots,
                safety_slots,
            }
        })
        .collect()
}

fn build_schedule_file(
    command: String,
    fleet_hash: String,
    stations: u64,
    horizon: u64,
    assignments: Vec<AssignmentEntry>,
    objective: Option<u64>,
    selected: Option<Vec<chargesched::RobotId>>,
) -> ScheduleFile {
    let mut file = ScheduleFile {
        horizon,
        stations,
        assignments,
        objective,
        selected,
        valid: false,
        provenance: Provenance {
            command,
            fleet_hash,
            solver_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };
    file.valid = file
        .to_schedule()
        .map(|s| validate_schedule(&s).is_valid())
        .unwrap_or(false);
    file
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::MinStations { fleet, reduce_horizon: reduce, out } => {
            let (fleet_file, hash) = load_fleet(&fleet)?;
            let (effective, horizon, plan) = effective_fleet(&fleet_file.robots, reduce)?;
            let solution = solve_min_stations(&effective, horizon)?;
            let assignments = assignment_entries(&effective, plan.as_ref(), &solution.phases);
            let file = build_schedule_file(
                "min-stations".into(),
                hash,
                solution.m_min,
                horizon,
                assignments,
                None,
                None,
            );
            emit(&file.to_json(), out.as_ref())
        }
        Command::MaxFlytime { fleet, stations, reduce_horizon: reduce, out } => {
            let (fleet_file, hash) = load_fleet(&fleet)?;
            let (effective, horizon, plan) = effective_fleet(&fleet_file.robots, reduce)?;
            let solution = solve_max_flytime(&effective, stations, horizon)?;
            let assignments = assignment_entries(&effective, plan.as_ref(), &solution.phases);
            let selected = solution
                .selection
                .iter()
                .zip(&effective)
                .filter(|(&u, _)| u)
                .map(|(_, r)| r.id.clone())
                .collect();
            let file = build_schedule_file(
                "max-flytime".into(),
                hash,
                stations,
                horizon,
                assignments,
                Some(solution.objective),
                Some(selected),
            );
            emit(&file.to_json(), out.as_ref())
        }
        Command::ReduceHorizon { fleet } => {
            let (fleet_file, _) = load_fleet(&fleet)?;
            let plan = reduce_horizon(&fleet_file.robots)?;
            let mut json = serde_json::to_string_pretty(&plan)
                .map_err(|e| input_error(e.to_string()))?;
            json.push('\n');
            print!("{json}");
            Ok(())
        }
        Command::Replan { schedule, robot, arrival } => {
            let file = load_schedule(&schedule)?;
            let sched = file.to_schedule()?;
            let id = chargesched::RobotId(robot);
            let result =
                replan_delayed(&sched.robots, &sched.phases, sched.stations, &id, arrival)?;
            let json = serde_json::json!({
                "robot": id,
                "arrival": arrival,
                "new_offset": result.new_offset,
                "charge_start": result.charge_start,
                "wait_slots": result.wait_slots,
            });
            println!("{json}");
            Ok(())
        }
        Command::Validate { schedule } => {
            let file = load_schedule(&schedule)?;
            let report = validate_schedule(&file.to_schedule()?);
            let json = serde_json::json!({
                "valid": report.is_valid(),
                "violation": report.violation.as_ref().map(|v| v.to_string()),
            });
            println!("{json}");
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure { code: 1, message: "schedule is infeasible".into() })
            }
        }
        Command::Gantt { schedule, format } => {
            let file = load_schedule(&schedule)?;
            let sched = file.to_schedule()?;
            match format {
                GanttFormat::Ascii => print!("{}", gantt_ascii(&sched)),
                GanttFormat::Svg => print!("{}", gantt_svg(&sched)),
            }
            Ok(())
        }
        Command::Bench { mode, robots, seed, count } => {
            if robots == 0 {
                return Err(input_error("--robots must be >= 1"));
            }
            println!("seed,n,horizon,ilp_m,tpws_m,ilp_ms,tpws_ms");
            for s in seed..seed + count {
                let fleet = generate_fleet(mode.into(), robots, s);
                let cycles: Vec<u64> = fleet.iter().map(|r| r.cycle_time()).collect();
                let horizon = scheduling_horizon(&cycles)?;

                let start = Instant::now();
                let ilp = solve_min_stations(&fleet, horizon)?;
                let ilp_ms = start.elapsed().as_secs_f64() * 1e3;

                let start = Instant::now();
                let (tpws_m, _) = schedule_tpws(&round_instance(&fleet));
                let tpws_ms = start.elapsed().as_secs_f64() * 1e3;

                println!(
                    "{s},{robots},{horizon},{},{tpws_m},{ilp_ms:.3},{tpws_ms:.3}",
                    ilp.m_min
                );
            }
            Ok(())
        }
    }
}
