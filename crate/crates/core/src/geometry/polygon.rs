use super::point::Point2;
use super::predicates::{point_in_polygon, point_segment_distance, segments_touch};
use super::GeometryError;

/// Tolerance used when validating polygon structure. Stricter than the
/// collision tolerance: a polygon this close to self-intersection is a
/// modelling error.
const VALIDATION_EPS: f64 = 1e-9;

/// A simple polygon stored in counterclockwise order.
///
/// Construction validates the invariants once; afterwards the value is
/// immutable and cheap to share.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Build a polygon from vertices in either orientation.
    ///
    /// Clockwise input is reversed to counterclockwise. Fails on fewer than
    /// three vertices, non-finite coordinates, repeated consecutive vertices,
    /// zero area, spikes, or self-intersection.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices { found: vertices.len() });
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        let n = vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].dist(vertices[j]) <= VALIDATION_EPS {
                return Err(GeometryError::DuplicateVertex { index: i });
            }
        }
        let area = signed_area(&vertices);
        if area.abs() <= VALIDATION_EPS {
            return Err(GeometryError::ZeroArea);
        }
        if area < 0.0 {
            // Reverse the cycle but keep the original first vertex.
            vertices.reverse();
            vertices.rotate_right(1);
        }
        check_simple(&vertices)?;
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges as (start, end) pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Positive area (the stored orientation is counterclockwise).
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        let n = self.vertices.len();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a += w;
        }
        Point2::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    /// Strict interior test by ray casting.
    pub fn contains(&self, p: Point2) -> bool {
        point_in_polygon(p, self)
    }

    /// All interior angles turn left (collinear runs allowed).
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            (b - a).cross(c - b) >= -VALIDATION_EPS
        })
    }

    pub fn translated(&self, delta: Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&v| v + delta).collect(),
        }
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Distance from a point to the polygon boundary; zero inside.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += vertices[i].cross(vertices[(i + 1) % n]);
    }
    acc / 2.0
}

/// All-pairs edge check. Non-adjacent edges must stay clear of each other;
/// adjacent edges must not fold back onto their neighbour.
fn check_simple(vertices: &[Point2]) -> Result<(), GeometryError> {
    let n = vertices.len();
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a1, a2) = edge(i);
            let (b1, b2) = edge(j);
            if adjacent {
                // Shared vertex aside, a spike means the far endpoint of one
                // edge lands on the other edge.
                let (far_a, far_b) = if j == i + 1 { (a1, b2) } else { (a2, b1) };
                if point_segment_distance(far_a, b1, b2) <= VALIDATION_EPS
                    || point_segment_distance(far_b, a1, a2) <= VALIDATION_EPS
                {
                    return Err(GeometryError::SelfIntersecting { edge_a: i, edge_b: j });
                }
            } else if segments_touch(a1, a2, b1, b2, VALIDATION_EPS) {
                return Err(GeometryError::SelfIntersecting { edge_a: i, edge_b: j });
            }
        }
    }
    Ok(())
}

/// Convenience constructor for axis-aligned rectangles.
pub fn rectangle(lo: Point2, hi: Point2) -> Result<Polygon, GeometryError> {
    Polygon::new(vec![
        lo,
        Point2::new(hi.x, lo.y),
        hi,
        Point2::new(lo.x, hi.y),
    ])
}

/// Regular polygon approximating a circle, counterclockwise, first vertex at
/// angle `phase`.
pub fn regular_polygon(
    center: Point2,
    radius: f64,
    sides: usize,
    phase: f64,
) -> Result<Polygon, GeometryError> {
    if sides < 3 || radius <= 0.0 {
        return Err(GeometryError::TooFewVertices { found: sides });
    }
    let vertices = (0..sides)
        .map(|k| {
            let t = phase + 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
            center + Point2::from_heading(t) * radius
        })
        .collect();
    Polygon::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polygon {
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let p = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(p.area() > 0.0);
        assert_eq!(p.vertices()[0], Point2::new(0.0, 0.0));
    }

    #[test]
    fn bowtie_rejected() {
        let r = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(matches!(r, Err(GeometryError::SelfIntersecting { .. })));
    }

    #[test]
    fn symmetric_bowtie_has_zero_area() {
        let r = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(matches!(r, Err(GeometryError::ZeroArea)));
    }

    #[test]
    fn too_few_vertices_rejected() {
        let r = Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]);
        assert!(matches!(r, Err(GeometryError::TooFewVertices { found: 2 })));
    }

    #[test]
    fn zero_area_rejected() {
        let r = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ]);
        assert!(matches!(r, Err(GeometryError::ZeroArea)));
    }

    #[test]
    fn contains_and_distance() {
        let sq = unit_square();
        assert!(sq.contains(Point2::new(0.5, 0.5)));
        assert!(!sq.contains(Point2::new(1.5, 0.5)));
        assert_eq!(sq.distance_to_point(Point2::new(0.5, 0.5)), 0.0);
        assert!((sq.distance_to_point(Point2::new(2.0, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centroid_of_square() {
        let c = unit_square().centroid();
        assert!((c.x - 0.5).abs() < 1e-12 && (c.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn convexity() {
        assert!(unit_square().is_convex());
        let l_shape = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        assert!(!l_shape.is_convex());
    }

    #[test]
    fn regular_polygon_vertex_count_and_radius() {
        let p = regular_polygon(Point2::new(3.0, 4.0), 2.0, 12, 0.0).unwrap();
        assert_eq!(p.len(), 12);
        for v in p.vertices() {
            assert!((v.dist(Point2::new(3.0, 4.0)) - 2.0).abs() < 1e-12);
        }
    }
}
