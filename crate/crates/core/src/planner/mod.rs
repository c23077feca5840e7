//! Weave path generation.
//!
//! A weave alternates over and under successive features relative to the
//! chord joining start and end, so the features brace the finished tube.
//! Waypoints pick one roadmap node per target obstacle on alternating sides;
//! the plan stitches side-restricted shortest paths through them.

mod pairs;
mod smooth;

pub use pairs::{all_pairs_plans, corridor_targets, PairOutcome, PairPolicy, TargetPolicy};
pub use smooth::smooth_path;

use thiserror::Error;

use crate::geometry::{EnvironmentMap, Point2};
use crate::roadmap::{NodeProvenance, RoadmapError, RoadmapGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("no target obstacles given")]
    EmptyTargets,
    #[error("target obstacle {index} does not exist ({obstacles} obstacles)")]
    InvalidTarget { index: usize, obstacles: usize },
    #[error("start and end coincide; the weave chord is undefined")]
    DegenerateChord,
    #[error("obstacle {obstacle} has no roadmap node {side} the chord")]
    NoNodeOnSide { obstacle: usize, side: Side },
    #[error("leg {leg} from node {from} to node {to} is unreachable")]
    LegUnreachable { leg: usize, from: usize, to: usize },
    #[error("waypoint node {node} is not an obstacle offset node")]
    NotAnObstacleNode { node: usize },
    #[error("waypoint sides do not alternate")]
    SidesDoNotAlternate,
    #[error("polyline has repeated consecutive points")]
    RepeatedPoint,
    #[error("anchor indices do not match the waypoint count")]
    AnchorMismatch,
    #[error(transparent)]
    Roadmap(#[from] RoadmapError),
}

/// Which side of the start-end chord a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }

    /// Rotation sense of a pass on this side: over the top curls clockwise,
    /// under the bottom curls counterclockwise.
    pub fn direction(self) -> WeaveDir {
        match self {
            Side::Above => WeaveDir::Cw,
            Side::Below => WeaveDir::Ccw,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Above => "above",
            Side::Below => "below",
        })
    }
}

/// Weave rotation tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeaveDir {
    Cw,
    Ccw,
}

impl std::fmt::Display for WeaveDir {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeaveDir::Cw => "cw",
            WeaveDir::Ccw => "ccw",
        })
    }
}

/// One contact stop of the weave: a roadmap node, the side of the chord it
/// sits on, and the rotation sense of the pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeaveWaypoint {
    pub node: usize,
    pub side: Side,
    pub dir: WeaveDir,
}

/// A routed weave: waypoints, the full polyline, which obstacles it touches
/// in order, and the derived length and turning data.
#[derive(Debug, Clone, PartialEq)]
pub struct WeavePlan {
    pub waypoints: Vec<WeaveWaypoint>,
    pub polyline: Vec<Point2>,
    /// Obstacle index per waypoint, in travel order.
    pub contacted: Vec<usize>,
    /// Indices into `polyline` marking the waypoint contacts.
    pub anchors: Vec<usize>,
    pub total_length: f64,
    /// Signed heading change at each interior polyline vertex.
    pub turn_angles: Vec<f64>,
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        r = PI;
    }
    r
}

fn turn_angles_of(polyline: &[Point2]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in polyline.windows(3) {
        let h0 = (w[1] - w[0]).heading();
        let h1 = (w[2] - w[1]).heading();
        out.push(wrap_angle(h1 - h0));
    }
    out
}

fn polyline_length(polyline: &[Point2]) -> f64 {
    polyline.windows(2).map(|w| w[0].dist(w[1])).sum()
}

impl WeavePlan {
    /// Assemble and validate a plan from raw parts. Lengths and turn angles
    /// are always recomputed from the polyline.
    pub fn from_parts(
        waypoints: Vec<WeaveWaypoint>,
        polyline: Vec<Point2>,
        contacted: Vec<usize>,
        anchors: Vec<usize>,
    ) -> Result<Self, PlanError> {
        if polyline.len() < 2 {
            return Err(PlanError::RepeatedPoint);
        }
        if polyline.windows(2).any(|w| w[0] == w[1]) {
            return Err(PlanError::RepeatedPoint);
        }
        if anchors.len() != waypoints.len() || contacted.len() != waypoints.len() {
            return Err(PlanError::AnchorMismatch);
        }
        if anchors.windows(2).any(|w| w[0] >= w[1])
            || anchors.iter().any(|&i| i == 0 || i + 1 >= polyline.len())
        {
            return Err(PlanError::AnchorMismatch);
        }
        if waypoints.windows(2).any(|w| w[0].side == w[1].side) {
            return Err(PlanError::SidesDoNotAlternate);
        }
        let total_length = polyline_length(&polyline);
        let turn_angles = turn_angles_of(&polyline);
        Ok(Self {
            waypoints,
            polyline,
            contacted,
            anchors,
            total_length,
            turn_angles,
        })
    }

    /// Sum of absolute turn angles, the friction proxy for extrusion.
    pub fn cumulative_bend(&self) -> f64 {
        self.turn_angles.iter().map(|a| a.abs()).sum()
    }

    /// Expected contact sequence: (obstacle, side) per waypoint.
    pub fn contact_sequence(&self) -> Vec<(usize, Side)> {
        self.contacted
            .iter()
            .zip(&self.waypoints)
            .map(|(&obs, w)| (obs, w.side))
            .collect()
    }

    /// Does the polyline stay collision-free in `env`?
    pub fn is_collision_free(&self, env: &EnvironmentMap, eps: f64) -> bool {
        self.polyline
            .windows(2)
            .all(|w| env.sight_clear(w[0], w[1], eps))
    }
}

/// Side of the chord `start -> end` the point `p` lies on; `None` when it is
/// exactly on the chord line.
pub fn side_of_chord(start: Point2, end: Point2, p: Point2) -> Option<Side> {
    let c = (end - start).cross(p - start);
    if c > 0.0 {
        Some(Side::Above)
    } else if c < 0.0 {
        Some(Side::Below)
    } else {
        None
    }
}

/// Perpendicular distance from `p` to the chord line.
pub fn chord_distance(start: Point2, end: Point2, p: Point2) -> f64 {
    let d = end - start;
    (d.cross(p - start) / d.norm()).abs()
}

/// Pick one waypoint per target obstacle, alternating sides of the chord
/// beginning with `first_side`.
///
/// Within a target the node on the required side nearest the chord wins;
/// exact ties break toward the lower node index. An obstacle with no node on
/// the required side is an error naming it, so the caller can dilate the
/// obstacle or drop the target.
pub fn select_weave_waypoints(
    env: &EnvironmentMap,
    graph: &RoadmapGraph,
    start: usize,
    end: usize,
    targets: &[usize],
    first_side: Side,
) -> Result<Vec<WeaveWaypoint>, PlanError> {
    if targets.is_empty() {
        return Err(PlanError::EmptyTargets);
    }
    for &t in targets {
        if t >= env.obstacles().len() {
            return Err(PlanError::InvalidTarget {
                index: t,
                obstacles: env.obstacles().len(),
            });
        }
    }
    let a = graph.position(start)?;
    let b = graph.position(end)?;
    if a == b {
        return Err(PlanError::DegenerateChord);
    }

    let mut side = first_side;
    let mut out = Vec::with_capacity(targets.len());
    for &target in targets {
        let mut best: Option<(f64, usize)> = None;
        for (idx, node) in graph.nodes().iter().enumerate() {
            let NodeProvenance::ObstacleVertex { obstacle, .. } = node.provenance else {
                continue;
            };
            if obstacle != target || side_of_chord(a, b, node.position) != Some(side) {
                continue;
            }
            let dist = chord_distance(a, b, node.position);
            let better = match best {
                None => true,
                Some((bd, bi)) => dist < bd || (dist == bd && idx < bi),
            };
            if better {
                best = Some((dist, idx));
            }
        }
        let Some((_, node)) = best else {
            return Err(PlanError::NoNodeOnSide { obstacle: target, side });
        };
        out.push(WeaveWaypoint {
            node,
            side,
            dir: side.direction(),
        });
        side = side.flipped();
    }
    Ok(out)
}

/// Route the weave through the waypoints.
///
/// Each leg is a shortest path restricted to its current side: intermediate
/// nodes must sit on the leg's side of the chord or within a band of width
/// `offset_d` around it. Legs share their junction node, which is recorded
/// as the contact anchor.
pub fn plan_weave(
    graph: &RoadmapGraph,
    start: usize,
    end: usize,
    waypoints: &[WeaveWaypoint],
) -> Result<WeavePlan, PlanError> {
    let a = graph.position(start)?;
    let b = graph.position(end)?;
    if waypoints.windows(2).any(|w| w[0].side == w[1].side) {
        return Err(PlanError::SidesDoNotAlternate);
    }

    let mut contacted = Vec::with_capacity(waypoints.len());
    for w in waypoints {
        let node = graph
            .nodes()
            .get(w.node)
            .ok_or(RoadmapError::InvalidNodeIndex {
                index: w.node,
                nodes: graph.len(),
            })?;
        match node.provenance {
            NodeProvenance::ObstacleVertex { obstacle, .. } => contacted.push(obstacle),
            NodeProvenance::Free => return Err(PlanError::NotAnObstacleNode { node: w.node }),
        }
    }

    // Node sequence with a waypoint-anchor flag per entry.
    let mut sequence: Vec<(usize, bool)> = vec![(start, false)];
    let stops: Vec<usize> = waypoints.iter().map(|w| w.node).collect();
    let band = graph.offset_d();

    let mut from = start;
    for (leg, leg_end) in stops.iter().chain(std::iter::once(&end)).enumerate() {
        let to = *leg_end;
        let is_waypoint = leg < stops.len();
        // The final leg keeps the side discipline of the last waypoint.
        let leg_side = if is_waypoint {
            Some(waypoints[leg].side)
        } else {
            waypoints.last().map(|w| w.side)
        };
        let found = match leg_side {
            Some(side) => graph.shortest_path_with(from, to, |n| {
                let p = graph.nodes()[n].position;
                chord_distance(a, b, p) <= band || side_of_chord(a, b, p) == Some(side)
            })?,
            None => graph.shortest_path(from, to)?,
        };
        let Some(path) = found else {
            return Err(PlanError::LegUnreachable { leg, from, to });
        };
        for (k, &n) in path.nodes.iter().enumerate().skip(1) {
            let last = k + 1 == path.nodes.len();
            sequence.push((n, last && is_waypoint));
        }
        from = to;
    }

    // Positions, dropping coincident consecutive nodes but keeping anchors.
    let mut points: Vec<(Point2, bool)> = Vec::with_capacity(sequence.len());
    for (n, anchor) in sequence {
        let p = graph.nodes()[n].position;
        match points.last_mut() {
            Some((last, last_anchor)) if *last == p => *last_anchor |= anchor,
            _ => points.push((p, anchor)),
        }
    }

    let anchors: Vec<usize> = points
        .iter()
        .enumerate()
        .filter_map(|(i, (_, a))| a.then_some(i))
        .collect();
    let polyline: Vec<Point2> = points.into_iter().map(|(p, _)| p).collect();
    WeavePlan::from_parts(waypoints.to_vec(), polyline, contacted, anchors)
}
