//! Quantize a continuous plan onto the fold stations.

use crate::planner::WeavePlan;

use super::{FoldCommand, FoldSchedule, TubeError, TubeSpec};

/// Turns smaller than this are treated as straight-line noise, not turns.
const TURN_FLOOR_RAD: f64 = 1e-9;

/// What to do with folds along straight runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StraightPolicy {
    /// Leave folds in place: spends material, needs no release actions.
    #[default]
    Keep,
    /// Release both threads: pays out the fold material, costs release time.
    ReleaseBoth,
}

impl StraightPolicy {
    fn command(self) -> FoldCommand {
        match self {
            StraightPolicy::Keep => FoldCommand::Keep,
            StraightPolicy::ReleaseBoth => FoldCommand::ReleaseBoth,
        }
    }
}

/// Turn a plan polyline into a fold-release program.
///
/// Each planned turn of angle `phi` becomes `n = max(1, round(|phi| /
/// theta))` single-side releases at consecutive stations, centred on the
/// corner's arclength; the per-turn residual `| |phi| - n theta |` must stay
/// within `angle_tol`. Straight stretches consume stations with the straight
/// policy command. Turns bend left by releasing the right thread and vice
/// versa.
pub fn discretize_plan(
    plan: &WeavePlan,
    tube: &TubeSpec,
    policy: StraightPolicy,
    angle_tol: f64,
) -> Result<FoldSchedule, TubeError> {
    if !(angle_tol > 0.0) {
        return Err(TubeError::NonPositiveField { field: "angle_tol", value: angle_tol });
    }
    let theta = tube.effective_theta()?;
    let spacing = tube.fold_spacing;
    let straight_step = policy.command().interval_length(tube);

    // Arclength of each corner along the plan.
    let mut corner_arclengths = Vec::with_capacity(plan.turn_angles.len());
    let mut acc = 0.0;
    for (i, w) in plan.polyline.windows(2).enumerate() {
        acc += w[0].dist(w[1]);
        if i + 2 < plan.polyline.len() {
            corner_arclengths.push(acc);
        }
    }
    let total_length = acc;

    let mut commands: Vec<(usize, FoldCommand)> = Vec::new();
    let mut station = 0usize;
    let mut deployed = 0.0f64;

    for (turn, (&phi, &at)) in plan
        .turn_angles
        .iter()
        .zip(&corner_arclengths)
        .enumerate()
    {
        if phi.abs() <= TURN_FLOOR_RAD {
            continue;
        }
        let releases = ((phi.abs() / theta).round() as usize).max(1);
        let residual = (phi.abs() - releases as f64 * theta).abs();
        if residual > angle_tol {
            return Err(TubeError::TurnResidualTooLarge {
                turn,
                angle: phi,
                releases,
                theta,
                residual,
                tol: angle_tol,
            });
        }

        // Straight commands until the release run is centred on the corner.
        let run_centre_offset = (releases as f64 + 1.0) / 2.0 * spacing;
        let want = ((at - deployed - run_centre_offset) / straight_step).round();
        let straights = if want > 0.0 { want as usize } else { 0 };
        for _ in 0..straights {
            station += 1;
            deployed += straight_step;
            commands.push((station, policy.command()));
        }

        let release = if phi > 0.0 {
            FoldCommand::ReleaseRight
        } else {
            FoldCommand::ReleaseLeft
        };
        for _ in 0..releases {
            station += 1;
            deployed += spacing;
            commands.push((station, release));
        }
    }

    // Tail straight run out to the planned end.
    let want = ((total_length - deployed) / straight_step).round();
    let straights = if want > 0.0 { want as usize } else { 0 };
    for _ in 0..straights {
        station += 1;
        commands.push((station, policy.command()));
    }

    let heading = match plan.polyline.get(1) {
        Some(&second) => (second - plan.polyline[0]).heading(),
        None => 0.0,
    };
    FoldSchedule::new(tube.clone(), plan.polyline[0], heading, commands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::planner::WeavePlan;
    use crate::tube::simulate_schedule;

    fn straight_plan(length: f64) -> WeavePlan {
        WeavePlan::from_parts(
            vec![],
            vec![Point2::new(0.0, 0.0), Point2::new(length, 0.0)],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn straight_plan_is_all_keeps() {
        let tube = TubeSpec::default();
        let plan = straight_plan(10.0 * tube.fold_spacing);
        let schedule = discretize_plan(&plan, &tube, StraightPolicy::Keep, 0.1).unwrap();
        assert_eq!(schedule.commands.len(), 10);
        assert!(schedule
            .commands
            .iter()
            .all(|(_, c)| *c == FoldCommand::Keep));
    }

    #[test]
    fn ninety_degree_left_turn_uses_two_right_releases() {
        // theta for the default 40 mm fold is about 0.802 rad, so a right
        // angle rounds to two releases with residual |pi/2 - 2 theta|.
        let tube = TubeSpec::default();
        let plan = WeavePlan::from_parts(
            vec![],
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(500.0, 0.0),
                Point2::new(500.0, 500.0),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let schedule = discretize_plan(&plan, &tube, StraightPolicy::Keep, 0.1).unwrap();
        let releases: Vec<_> = schedule
            .commands
            .iter()
            .filter(|(_, c)| matches!(c, FoldCommand::ReleaseRight))
            .collect();
        assert_eq!(releases.len(), 2);
        assert!(!schedule
            .commands
            .iter()
            .any(|(_, c)| matches!(c, FoldCommand::ReleaseLeft)));
        // The rollout heading matches the planned quarter turn within the
        // discretization residual.
        let theta = tube.effective_theta().unwrap();
        let (_, final_heading) = simulate_schedule(&schedule).unwrap();
        assert!((final_heading - 2.0 * theta).abs() < 1e-9);
        assert!((std::f64::consts::FRAC_PI_2 - 2.0 * theta).abs() < 0.1);
    }

    #[test]
    fn tight_tolerance_reports_the_offending_turn() {
        let tube = TubeSpec::default();
        let plan = WeavePlan::from_parts(
            vec![],
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(500.0, 0.0),
                Point2::new(500.0, 500.0),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let err = discretize_plan(&plan, &tube, StraightPolicy::Keep, 1e-4).unwrap_err();
        match err {
            TubeError::TurnResidualTooLarge { turn, releases, .. } => {
                assert_eq!(turn, 0);
                assert_eq!(releases, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn reel_exhaustion_reports_required_length() {
        let mut tube = TubeSpec::default();
        tube.reel_length = 500.0;
        let plan = straight_plan(1000.0);
        let err = discretize_plan(&plan, &tube, StraightPolicy::Keep, 0.1).unwrap_err();
        match err {
            TubeError::ReelExhausted { required, available } => {
                assert!((required - 1000.0).abs() < 1e-9);
                assert!((available - 500.0).abs() < 1e-9);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn release_both_straights_cover_more_ground_per_station() {
        let tube = TubeSpec::default();
        let plan = straight_plan(1000.0);
        let keep = discretize_plan(&plan, &tube, StraightPolicy::Keep, 0.1).unwrap();
        let both = discretize_plan(&plan, &tube, StraightPolicy::ReleaseBoth, 0.1).unwrap();
        assert!(both.commands.len() < keep.commands.len());
        assert!(both
            .commands
            .iter()
            .all(|(_, c)| *c == FoldCommand::ReleaseBoth));
    }
}
