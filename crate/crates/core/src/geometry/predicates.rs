//! Tolerant segment and polygon predicates.
//!
//! The collision convention throughout the crate is conservative: two
//! features that come within `eps` of each other count as touching. A tube
//! that grazes an obstacle is a collision, never a near miss.

use super::point::Point2;
use super::polygon::Polygon;
use super::GeometryError;

/// Default predicate tolerance, in millimetres.
pub const DEFAULT_EPS: f64 = 1e-6;

/// A directed line segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(self) -> f64 {
        self.a.dist(self.b)
    }

    fn check_nondegenerate(self) -> Result<(), GeometryError> {
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        if self.a == self.b {
            return Err(GeometryError::DegenerateSegment { at: self.a });
        }
        Ok(())
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// True when the open interiors of the segments cross transversally.
fn proper_crossing(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Closest point on the closed segment `a`-`b` to `p`.
pub fn point_segment_closest(p: Point2, a: Point2, b: Point2) -> Point2 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

/// Distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    p.dist(point_segment_closest(p, a, b))
}

/// Minimum distance between two closed segments. Zero when they cross.
pub fn segment_distance(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> f64 {
    if proper_crossing(p1, p2, q1, q2) {
        return 0.0;
    }
    point_segment_distance(q1, p1, p2)
        .min(point_segment_distance(q2, p1, p2))
        .min(point_segment_distance(p1, q1, q2))
        .min(point_segment_distance(p2, q1, q2))
}

/// Conservative intersection core: crossing, or approach within `eps`.
pub(crate) fn segments_touch(p1: Point2, p2: Point2, q1: Point2, q2: Point2, eps: f64) -> bool {
    segment_distance(p1, p2, q1, q2) <= eps
}

/// Do two segments share a point? Endpoint contact within `eps` counts.
///
/// Rejects zero-length input; a degenerate segment is a modelling error, not
/// a geometric case.
pub fn segments_intersect(s: &Segment, t: &Segment, eps: f64) -> Result<bool, GeometryError> {
    s.check_nondegenerate()?;
    t.check_nondegenerate()?;
    Ok(segments_touch(s.a, s.b, t.a, t.b, eps))
}

/// Even-odd ray cast. Points on the boundary are not reliably classified;
/// pair this with edge-distance checks wherever the boundary matters.
pub fn point_in_polygon(p: Point2, poly: &Polygon) -> bool {
    let vs = poly.vertices();
    let mut inside = false;
    let mut j = vs.len() - 1;
    for i in 0..vs.len() {
        let (a, b) = (vs[j], vs[i]);
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub(crate) fn segment_hits_polygon(a: Point2, b: Point2, poly: &Polygon, eps: f64) -> bool {
    for (ea, eb) in poly.edges() {
        if segments_touch(a, b, ea, eb, eps) {
            return true;
        }
    }
    point_in_polygon(a, poly) || point_in_polygon(b, poly)
}

/// Does the segment touch the polygon? True when it crosses or comes within
/// `eps` of any edge, or when either endpoint lies strictly inside.
pub fn segment_intersects_polygon(
    s: &Segment,
    poly: &Polygon,
    eps: f64,
) -> Result<bool, GeometryError> {
    s.check_nondegenerate()?;
    Ok(segment_hits_polygon(s.a, s.b, poly, eps))
}

/// Minimum distance from a segment to the polygon boundary; zero when the
/// segment enters or touches the polygon.
pub fn segment_polygon_distance(a: Point2, b: Point2, poly: &Polygon) -> f64 {
    if point_in_polygon(a, poly) || point_in_polygon(b, poly) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for (ea, eb) in poly.edges() {
        best = best.min(segment_distance(a, b, ea, eb));
    }
    best
}
