//! 2D geometric primitives: points, segments, simple polygons, tolerant
//! intersection predicates, outward vertex offsetting and seeded random
//! environment generation.
//!
//! Everything here is a pure function over immutable values; all lengths are
//! millimetres.

mod environment;
mod point;
mod polygon;
mod predicates;
mod random;

pub mod offset;

pub use environment::EnvironmentMap;
pub use offset::{convex_hull, dilate_and_simplify, offset_nodes, offset_nodes_indexed};
pub use point::Point2;
pub use polygon::{rectangle, regular_polygon, Polygon};
pub use predicates::{
    point_in_polygon, point_segment_closest, point_segment_distance, segment_distance,
    segment_intersects_polygon, segment_polygon_distance, segments_intersect, Segment,
    DEFAULT_EPS,
};
pub(crate) use predicates::{segment_hits_polygon, segments_touch};

use thiserror::Error;

/// Errors from geometric construction and predicates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate zero-length segment at {at}")]
    DegenerateSegment { at: Point2 },
    #[error("polygon needs at least 3 vertices, found {found}")]
    TooFewVertices { found: usize },
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("repeated consecutive vertex at index {index}")]
    DuplicateVertex { index: usize },
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon self-intersects between edges {edge_a} and {edge_b}")]
    SelfIntersecting { edge_a: usize, edge_b: usize },
    #[error("offset distance must be positive, got {d}")]
    NonPositiveOffset { d: f64 },
    #[error("vertex budget must be at least 3, got {max_vertices}")]
    VertexBudgetTooSmall { max_vertices: usize },
    #[error("dilation margin must be non-negative, got {margin}")]
    NegativeMargin { margin: f64 },
    #[error("simplification to {max_vertices} vertices collapsed the polygon")]
    SimplificationCollapsed { max_vertices: usize },
    #[error("obstacle {obstacle} vertex {vertex} is not strictly inside the boundary")]
    ObstacleOutsideBoundary { obstacle: usize, vertex: usize },
    #[error("obstacles {first} and {second} overlap")]
    ObstaclesOverlap { first: usize, second: usize },
    #[error("obstacle {first} and obstacle {second} are nested")]
    ObstacleContained { first: usize, second: usize },
    #[error("no obstacle with index {index}")]
    NoSuchObstacle { index: usize },
    #[error("invalid obstacle size range [{min}, {max}]")]
    InvalidSizeRange { min: f64, max: f64 },
    #[error("placed {placed} of {requested} obstacles after {attempts} attempts")]
    PlacementFailed {
        placed: usize,
        requested: usize,
        attempts: usize,
    },
}

pub use random::random_environment;
