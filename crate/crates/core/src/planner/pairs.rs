//! Batch planning over node pairs.

use crate::geometry::{segment_polygon_distance, EnvironmentMap, Point2};
use crate::roadmap::RoadmapGraph;

use super::{
    plan_weave, select_weave_waypoints, smooth_path, PlanError, Side, WeavePlan,
};

/// How target obstacles are chosen for a start/end pair.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetPolicy {
    /// Every obstacle whose boundary comes within the roadmap offset `d` of
    /// the chord, ordered along it.
    Corridor,
    /// A fixed target list applied to every pair.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairPolicy {
    pub first_side: Side,
    pub targets: TargetPolicy,
    /// Keep every `stride`-th ordered pair (1 keeps all).
    pub stride: usize,
    /// Only use nodes within this distance of the boundary as endpoints;
    /// `None` admits every node.
    pub boundary_margin: Option<f64>,
    pub smooth: bool,
}

impl Default for PairPolicy {
    fn default() -> Self {
        Self {
            first_side: Side::Above,
            targets: TargetPolicy::Corridor,
            stride: 1,
            boundary_margin: None,
            smooth: true,
        }
    }
}

/// One planned (or failed) ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub start: usize,
    pub end: usize,
    pub result: Result<WeavePlan, PlanError>,
}

/// Obstacles intersecting the corridor of half-width `d` around the chord,
/// ordered by the projection of their centroid onto it.
pub fn corridor_targets(
    env: &EnvironmentMap,
    a: Point2,
    b: Point2,
    d: f64,
) -> Vec<usize> {
    let chord = b - a;
    let len2 = chord.norm_squared();
    let mut hits: Vec<(f64, usize)> = env
        .obstacles()
        .iter()
        .enumerate()
        .filter(|(_, obs)| segment_polygon_distance(a, b, obs) <= d)
        .map(|(i, obs)| {
            let t = if len2 > 0.0 {
                (obs.centroid() - a).dot(chord) / len2
            } else {
                0.0
            };
            (t, i)
        })
        .collect();
    hits.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    hits.into_iter().map(|(_, i)| i).collect()
}

/// Plan a weave for every eligible ordered node pair; failures are recorded
/// per pair rather than aborting the batch. The enumeration order is fixed,
/// so repeated runs give identical output.
pub fn all_pairs_plans(
    env: &EnvironmentMap,
    graph: &RoadmapGraph,
    policy: &PairPolicy,
) -> Vec<PairOutcome> {
    let stride = policy.stride.max(1);
    let eligible: Vec<usize> = (0..graph.len())
        .filter(|&i| match policy.boundary_margin {
            None => true,
            Some(m) => {
                let p = graph.nodes()[i].position;
                env.boundary()
                    .edges()
                    .map(|(ea, eb)| crate::geometry::point_segment_distance(p, ea, eb))
                    .fold(f64::INFINITY, f64::min)
                    <= m
            }
        })
        .collect();

    let mut outcomes = Vec::new();
    let mut counter = 0usize;
    for &start in &eligible {
        for &end in &eligible {
            if start == end {
                continue;
            }
            counter += 1;
            if (counter - 1) % stride != 0 {
                continue;
            }
            outcomes.push(PairOutcome {
                start,
                end,
                result: plan_pair(env, graph, start, end, policy),
            });
        }
    }
    outcomes
}

fn plan_pair(
    env: &EnvironmentMap,
    graph: &RoadmapGraph,
    start: usize,
    end: usize,
    policy: &PairPolicy,
) -> Result<WeavePlan, PlanError> {
    let a = graph.position(start)?;
    let b = graph.position(end)?;
    let targets = match &policy.targets {
        TargetPolicy::Explicit(t) => t.clone(),
        TargetPolicy::Corridor => corridor_targets(env, a, b, graph.offset_d()),
    };
    let plan = if targets.is_empty() {
        plan_weave(graph, start, end, &[])?
    } else {
        let wps = select_weave_waypoints(env, graph, start, end, &targets, policy.first_side)?;
        plan_weave(graph, start, end, &wps)?
    };
    Ok(if policy.smooth {
        smooth_path(&plan, env)
    } else {
        plan
    })
}
