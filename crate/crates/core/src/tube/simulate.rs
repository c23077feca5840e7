//! Forward kinematic rollout of a fold schedule.

use crate::geometry::Point2;

use super::{FoldSchedule, TubeError};

/// Roll the schedule out from the base pose.
///
/// Each station interval advances the tip by its straight-run length along
/// the current heading; a single release then kinks the heading by the fold
/// angle (left release bends right, right release bends left). The polyline
/// contains a vertex only where the heading changes, plus the endpoints.
/// Returns the polyline and the final heading.
pub fn simulate_schedule(schedule: &FoldSchedule) -> Result<(Vec<Point2>, f64), TubeError> {
    let theta = schedule.tube.effective_theta()?;
    let mut heading = schedule.base_heading;
    let mut tip = schedule.base_position;
    let mut polyline = vec![tip];

    for station in 1..=schedule.last_station() {
        let cmd = schedule.command_at(station);
        tip = tip + Point2::from_heading(heading) * cmd.interval_length(&schedule.tube);
        let dh = cmd.heading_change(theta);
        if dh != 0.0 {
            polyline.push(tip);
            heading += dh;
        }
    }
    if polyline.last() != Some(&tip) {
        polyline.push(tip);
    }
    Ok((polyline, heading))
}
