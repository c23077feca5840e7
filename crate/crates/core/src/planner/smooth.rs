//! Shortcut smoothing over a 3-vertex sliding window.

use crate::geometry::{EnvironmentMap, DEFAULT_EPS};

use super::WeavePlan;

/// Drop interior vertices whose bypass segment is collision-free, sweeping
/// until a full pass changes nothing.
///
/// Waypoint anchors and the endpoints are never removed, so the contact
/// sequence survives. The result is never longer than the input and a second
/// application is a no-op.
pub fn smooth_path(plan: &WeavePlan, env: &EnvironmentMap) -> WeavePlan {
    let mut points = plan.polyline.clone();
    let mut anchored = vec![false; points.len()];
    for &i in &plan.anchors {
        anchored[i] = true;
    }

    loop {
        let mut changed = false;
        let mut i = 1;
        while i + 1 < points.len() {
            let removable = !anchored[i]
                && points[i - 1] != points[i + 1]
                && env.sight_clear(points[i - 1], points[i + 1], DEFAULT_EPS);
            if removable {
                points.remove(i);
                anchored.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }

    let anchors = anchored
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| a.then_some(i))
        .collect();
    WeavePlan::from_parts(
        plan.waypoints.clone(),
        points,
        plan.contacted.clone(),
        anchors,
    )
    .expect("smoothing preserves plan invariants")
}
