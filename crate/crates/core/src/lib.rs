//! Planning for extruded inflatable-tube barriers.
//!
//! The crate takes a polygonal map of environmental features, builds a
//! visibility-graph roadmap over offset nodes, generates alternating
//! over/under weave paths between start and end points, discretizes those
//! paths into fold-release commands for a pre-folded everting tube, and
//! checks the result against structural limits (distributed load capacity,
//! cumulative bend budget, material and reel accounting).

pub mod geometry;
pub mod planner;
pub mod roadmap;
pub mod tube;
pub mod units;

pub use geometry::{
    dilate_and_simplify, offset_nodes, random_environment, segment_intersects_polygon,
    segments_intersect, EnvironmentMap, GeometryError, Point2, Polygon, Segment, DEFAULT_EPS,
};
