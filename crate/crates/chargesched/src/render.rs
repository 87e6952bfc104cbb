//! Gantt renderings of a schedule: ASCII for terminals, SVG for reports.
//! Charging slots render green (`C`), flying slots red (`F`).

use crate::schedule::{charging_at, occupancy_profile, Schedule};

fn row_char(count: u32) -> char {
    char::from_digit(count.min(35), 36).unwrap_or('+')
}

/// One row per deployed robot over one horizon, plus an occupancy footer.
pub fn gantt_ascii(schedule: &Schedule) -> String {
    let mut out = format!(
        "horizon={} stations={}\n",
        schedule.horizon, schedule.stations
    );
    let label_width = schedule
        .phases
        .iter()
        .map(|p| p.robot_id.0.len())
        .max()
        .unwrap_or(0)
        .max(3);
    for phase in &schedule.phases {
        let robot = schedule
            .robots
            .iter()
            .find(|r| r.id == phase.robot_id)
            .expect("validated schedule");
        let cycle = robot.cycle_time();
        let mut row = String::with_capacity(schedule.horizon as usize);
        for t in 0..schedule.horizon {
            row.push(if charging_at(robot.charge_slots, cycle, phase.offset, t) {
                'C'
            } else {
                'F'
            });
        }
        out.push_str(&format!("{:<label_width$} {row}\n", phase.robot_id.0));
    }
    if !schedule.phases.is_empty() {
        let profile = occupancy_profile(&schedule.robots, &schedule.phases, schedule.horizon)
            .expect("validated schedule");
        let footer: String = profile.counts.iter().map(|&c| row_char(c)).collect();
        out.push_str(&format!("{:<label_width$} {footer}\n", "occ"));
    }
    out
}

const SLOT_W: u64 = 12;
const ROW_H: u64 = 18;

/// One rect per slot, robots top to bottom in phase order, slots left to
/// right; deterministic element order.
pub fn gantt_svg(schedule: &Schedule) -> String {
    let width = schedule.horizon * SLOT_W + 2;
    let height = schedule.phases.len() as u64 * ROW_H + 2;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\">\n"
    );
    for (row, phase) in schedule.phases.iter().enumerate() {
        let robot = schedule
            .robots
            .iter()
            .find(|r| r.id == phase.robot_id)
            .expect("validated schedule");
        let cycle = robot.cycle_time();
        for t in 0..schedule.horizon {
            let fill = if charging_at(robot.charge_slots, cycle, phase.offset, t) {
                "green"
            } else {
                "red"
            };
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"><title>{} t={}</title></rect>\n",
                t * SLOT_W + 1,
                row as u64 * ROW_H + 1,
                SLOT_W - 1,
                ROW_H - 2,
                fill,
                phase.robot_id,
                t
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
