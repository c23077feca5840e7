//! Verification of a rolled-out tube against an environment, and robustness
//! of a fixed schedule to obstacle placement error.

use crate::geometry::{
    point_in_polygon, point_segment_closest, segment_hits_polygon, segments_touch,
    EnvironmentMap, Point2, DEFAULT_EPS,
};
use crate::planner::Side;

use super::{simulate_schedule, FoldSchedule, TubeError};

/// Tolerances for verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyParams {
    /// Collision predicate tolerance.
    pub eps: f64,
    /// A feature closer to the path than this counts as contacted (braced
    /// against) by the tube.
    pub contact_clearance: f64,
}

impl VerifyParams {
    pub fn new(contact_clearance: f64) -> Self {
        Self { eps: DEFAULT_EPS, contact_clearance }
    }
}

/// A feature the path presses against: where along the path, how close, and
/// on which side the path passes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactObservation {
    pub obstacle: usize,
    pub side: Side,
    /// Arclength along the path of the closest approach.
    pub arclength: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Collision flag per obstacle.
    pub collisions: Vec<bool>,
    /// Path stays inside the boundary ring.
    pub boundary_ok: bool,
    /// Smallest obstacle distance anywhere on the path; infinite with no
    /// obstacles.
    pub min_clearance: f64,
    /// Contacted obstacles in travel order.
    pub contacts: Vec<ContactObservation>,
    /// Contact sides strictly alternate.
    pub alternation_ok: bool,
    /// Observed contact sequence equals the expected one, when given.
    pub matches_expected: Option<bool>,
    pub pass: bool,
}

fn closest_on_segment_pair(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> (Point2, f64) {
    // Candidate closest pairs; a transversal crossing is caught by the
    // endpoint projections only approximately, so test the crossing first.
    let d = |p: Point2, a: Point2, b: Point2| {
        let c = point_segment_closest(p, a, b);
        (c, p.dist(c))
    };
    let (ca, da) = d(q1, p1, p2);
    let (cb, db) = d(q2, p1, p2);
    let (_, dc) = d(p1, q1, q2);
    let (_, dd) = d(p2, q1, q2);
    let mut best = (ca, da);
    if db < best.1 {
        best = (cb, db);
    }
    if dc < best.1 {
        best = (p1, dc);
    }
    if dd < best.1 {
        best = (p2, dd);
    }
    // Proper crossing: the closest point is the intersection itself.
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.cross(s);
    if denom != 0.0 {
        let t = (q1 - p1).cross(s) / denom;
        let u = (q1 - p1).cross(r) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return (p1 + r * t, 0.0);
        }
    }
    best
}

/// Check a rolled-out polyline against the environment.
///
/// The report carries per-obstacle collision flags, the minimum clearance,
/// the contacted features in travel order with the side the path passes
/// them on, and whether those contacts alternate. When `expected` is given
/// (the planned contact sequence), the observed sequence must match it for
/// the report to pass.
pub fn verify_discretized(
    env: &EnvironmentMap,
    polyline: &[Point2],
    params: &VerifyParams,
    expected: Option<&[(usize, Side)]>,
) -> VerificationReport {
    let segments: Vec<(Point2, Point2, f64)> = {
        let mut acc = 0.0;
        polyline
            .windows(2)
            .map(|w| {
                let start = acc;
                acc += w[0].dist(w[1]);
                (w[0], w[1], start)
            })
            .collect()
    };

    let chord_dir = match polyline.len() {
        0 | 1 => Point2::new(1.0, 0.0),
        _ => polyline[polyline.len() - 1] - polyline[0],
    };

    let mut collisions = Vec::with_capacity(env.obstacles().len());
    let mut contacts: Vec<ContactObservation> = Vec::new();
    let mut min_clearance = f64::INFINITY;

    for (obs_idx, obs) in env.obstacles().iter().enumerate() {
        let mut hit = false;
        let mut best: Option<(f64, f64, Point2)> = None; // (distance, arclength, point)
        for &(a, b, start_arc) in &segments {
            if segment_hits_polygon(a, b, obs, params.eps) {
                hit = true;
            }
            if point_in_polygon(a, obs) {
                best = Some((0.0, start_arc, a));
                continue;
            }
            for (ea, eb) in obs.edges() {
                let (on_path, dist) = closest_on_segment_pair(a, b, ea, eb);
                let closer = best.map_or(true, |(bd, _, _)| dist < bd);
                if closer {
                    best = Some((dist, start_arc + a.dist(on_path), on_path));
                }
            }
        }
        collisions.push(hit);
        if let Some((dist, arclength, point)) = best {
            min_clearance = min_clearance.min(dist);
            if dist <= params.contact_clearance {
                let side = if chord_dir.cross(point - obs.centroid()) >= 0.0 {
                    Side::Above
                } else {
                    Side::Below
                };
                contacts.push(ContactObservation { obstacle: obs_idx, side, arclength, distance: dist });
            }
        }
    }

    contacts.sort_by(|a, b| {
        a.arclength
            .partial_cmp(&b.arclength)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.obstacle.cmp(&b.obstacle))
    });

    let boundary_ok = polyline
        .first()
        .is_none_or(|&p| point_in_polygon(p, env.boundary()))
        && segments.iter().all(|&(a, b, _)| {
            env.boundary()
                .edges()
                .all(|(ea, eb)| !segments_touch(a, b, ea, eb, params.eps))
        });

    let alternation_ok = contacts.windows(2).all(|w| w[0].side != w[1].side);
    let matches_expected = expected.map(|exp| {
        contacts.len() == exp.len()
            && contacts
                .iter()
                .zip(exp)
                .all(|(c, &(obs, side))| c.obstacle == obs && c.side == side)
    });

    let pass = !collisions.iter().any(|&c| c)
        && boundary_ok
        && alternation_ok
        && matches_expected != Some(false);

    VerificationReport {
        collisions,
        boundary_ok,
        min_clearance,
        contacts,
        alternation_ok,
        matches_expected,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationOutcome {
    Pass,
    Fail,
    /// The displacement broke the environment invariants (feature left the
    /// boundary or hit a neighbour), so the trial is meaningless.
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSample {
    pub offset: Point2,
    pub outcome: PerturbationOutcome,
}

/// Largest passing axis-aligned displacement magnitude per direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectionalMargins {
    pub pos_x: f64,
    pub neg_x: f64,
    pub pos_y: f64,
    pub neg_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginMap {
    pub obstacle: usize,
    pub samples: Vec<PerturbationSample>,
    pub margins: DirectionalMargins,
}

/// Sweep one obstacle over a displacement grid and re-verify the fixed
/// schedule at every position.
///
/// The schedule is open-loop: the rollout never changes, only the world
/// does. The nominal environment must verify cleanly first; its contact
/// sequence becomes the expectation every displaced trial is held to.
pub fn perturbation_robustness(
    env: &EnvironmentMap,
    schedule: &FoldSchedule,
    obstacle: usize,
    grid: &[Point2],
    params: &VerifyParams,
) -> Result<MarginMap, TubeError> {
    if obstacle >= env.obstacles().len() {
        return Err(TubeError::NoSuchObstacle { index: obstacle });
    }
    let (polyline, _) = simulate_schedule(schedule)?;
    let nominal = verify_discretized(env, &polyline, params, None);
    if !nominal.pass || nominal.contacts.is_empty() {
        return Err(TubeError::NominalVerificationFailed);
    }
    let expected: Vec<(usize, Side)> = nominal
        .contacts
        .iter()
        .map(|c| (c.obstacle, c.side))
        .collect();

    let mut samples = Vec::with_capacity(grid.len());
    let mut margins = DirectionalMargins::default();
    for &offset in grid {
        let outcome = match env.with_obstacle_translated(obstacle, offset) {
            Err(_) => PerturbationOutcome::Invalid,
            Ok(moved) => {
                let report = verify_discretized(&moved, &polyline, params, Some(&expected));
                if report.pass {
                    PerturbationOutcome::Pass
                } else {
                    PerturbationOutcome::Fail
                }
            }
        };
        if outcome == PerturbationOutcome::Pass {
            if offset.y == 0.0 && offset.x > 0.0 {
                margins.pos_x = margins.pos_x.max(offset.x);
            }
            if offset.y == 0.0 && offset.x < 0.0 {
                margins.neg_x = margins.neg_x.max(-offset.x);
            }
            if offset.x == 0.0 && offset.y > 0.0 {
                margins.pos_y = margins.pos_y.max(offset.y);
            }
            if offset.x == 0.0 && offset.y < 0.0 {
                margins.neg_y = margins.neg_y.max(-offset.y);
            }
        }
        samples.push(PerturbationSample { offset, outcome });
    }

    Ok(MarginMap { obstacle, samples, margins })
}

/// Symmetric axis-aligned sweep grid: `+-step, +-2 step, ...` out to
/// `max_offset` on both axes, zero displacement first.
pub fn axis_sweep_grid(step: f64, max_offset: f64) -> Vec<Point2> {
    let mut grid = vec![Point2::new(0.0, 0.0)];
    let n = (max_offset / step).floor() as usize;
    for k in 1..=n {
        let d = step * k as f64;
        grid.push(Point2::new(d, 0.0));
        grid.push(Point2::new(-d, 0.0));
        grid.push(Point2::new(0.0, d));
        grid.push(Point2::new(0.0, -d));
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rectangle;

    fn env_with_pillar() -> EnvironmentMap {
        let bounds = rectangle(Point2::new(-100.0, -100.0), Point2::new(500.0, 100.0)).unwrap();
        let pillar = rectangle(Point2::new(190.0, -10.0), Point2::new(210.0, 10.0)).unwrap();
        EnvironmentMap::new("one-pillar", bounds, vec![pillar]).unwrap()
    }

    #[test]
    fn straight_line_in_empty_env_passes_with_infinite_clearance() {
        let bounds = rectangle(Point2::new(-10.0, -10.0), Point2::new(10.0, 10.0)).unwrap();
        let env = EnvironmentMap::new("empty", bounds, vec![]).unwrap();
        let polyline = [Point2::new(-5.0, 0.0), Point2::new(5.0, 0.0)];
        let report = verify_discretized(&env, &polyline, &VerifyParams::new(5.0), None);
        assert!(report.pass);
        assert_eq!(report.min_clearance, f64::INFINITY);
        assert!(report.contacts.is_empty());
    }

    #[test]
    fn puncturing_polyline_names_the_pillar() {
        let env = env_with_pillar();
        let polyline = [Point2::new(0.0, 0.0), Point2::new(400.0, 0.0)];
        let report = verify_discretized(&env, &polyline, &VerifyParams::new(30.0), None);
        assert_eq!(report.collisions, vec![true]);
        assert!(!report.pass);
        assert_eq!(report.min_clearance, 0.0);
    }

    #[test]
    fn passing_above_reports_above_contact() {
        let env = env_with_pillar();
        let polyline = [Point2::new(0.0, 30.0), Point2::new(400.0, 30.0)];
        let report = verify_discretized(&env, &polyline, &VerifyParams::new(30.0), None);
        assert!(report.pass);
        assert_eq!(report.contacts.len(), 1);
        assert_eq!(report.contacts[0].side, Side::Above);
        assert!((report.contacts[0].distance - 20.0).abs() < 1e-9);
        assert!((report.min_clearance - 20.0).abs() < 1e-9);
    }

    #[test]
    fn expected_sequence_mismatch_fails() {
        let env = env_with_pillar();
        let polyline = [Point2::new(0.0, 30.0), Point2::new(400.0, 30.0)];
        let expected = vec![(0usize, Side::Below)];
        let report =
            verify_discretized(&env, &polyline, &VerifyParams::new(30.0), Some(&expected));
        assert_eq!(report.matches_expected, Some(false));
        assert!(!report.pass);
    }

    #[test]
    fn leaving_the_boundary_fails() {
        let env = env_with_pillar();
        let polyline = [Point2::new(0.0, 50.0), Point2::new(400.0, 150.0)];
        let report = verify_discretized(&env, &polyline, &VerifyParams::new(30.0), None);
        assert!(!report.boundary_ok);
        assert!(!report.pass);
    }

    #[test]
    fn axis_sweep_grid_is_axis_aligned_and_symmetric() {
        let grid = axis_sweep_grid(10.0, 30.0);
        assert_eq!(grid.len(), 13);
        assert!(grid.iter().all(|p| p.x == 0.0 || p.y == 0.0));
    }
}
