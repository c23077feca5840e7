//! Outward vertex offsetting and polygon simplification.

use super::point::Point2;
use super::polygon::Polygon;
use super::GeometryError;

/// Offset nodes paired with the index of the source vertex.
///
/// One node per convex vertex, placed on the outward angle bisector at
/// distance `d`. Reflex and collinear vertices yield nothing: a node tucked
/// into a concavity cannot act as a weave contact.
pub fn offset_nodes_indexed(
    poly: &Polygon,
    d: f64,
) -> Result<Vec<(usize, Point2)>, GeometryError> {
    if !(d > 0.0) {
        return Err(GeometryError::NonPositiveOffset { d });
    }
    let vs = poly.vertices();
    let n = vs.len();
    let mut out = Vec::new();
    for i in 0..n {
        let prev = vs[(i + n - 1) % n];
        let v = vs[i];
        let next = vs[(i + 1) % n];
        // Left turn at a counterclockwise vertex means convex.
        if (v - prev).cross(next - v) <= 0.0 {
            continue;
        }
        let to_prev = match (prev - v).normalized() {
            Some(u) => u,
            None => continue,
        };
        let to_next = match (next - v).normalized() {
            Some(u) => u,
            None => continue,
        };
        // The sum of the two edge directions bisects the interior angle.
        let inward = match (to_prev + to_next).normalized() {
            Some(u) => u,
            None => continue,
        };
        out.push((i, v - inward * d));
    }
    Ok(out)
}

/// Offset node positions only. See [`offset_nodes_indexed`].
pub fn offset_nodes(poly: &Polygon, d: f64) -> Result<Vec<Point2>, GeometryError> {
    Ok(offset_nodes_indexed(poly, d)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

/// Convex hull by monotone chain; collinear points are dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() * 2);
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if (b - a).cross(p - b) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Miter offset of a convex counterclockwise ring by `margin >= 0`.
fn miter_offset(ring: &[Point2], margin: f64) -> Vec<Point2> {
    if margin == 0.0 {
        return ring.to_vec();
    }
    let n = ring.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = ring[(i + n - 1) % n];
        let v = ring[i];
        let next = ring[(i + 1) % n];
        let e1 = (v - prev).normalized().unwrap_or(Point2::new(1.0, 0.0));
        let e2 = (next - v).normalized().unwrap_or(Point2::new(1.0, 0.0));
        // Outward normals of the two incident edges (interior is left of
        // each directed edge).
        let n1 = Point2::new(e1.y, -e1.x);
        let n2 = Point2::new(e2.y, -e2.x);
        let denom = 1.0 + n1.dot(n2);
        out.push(v + (n1 + n2) * (margin / denom));
    }
    out
}

/// Clip a convex counterclockwise subject polygon against `n . x <= c`.
fn clip_halfplane(subject: &[Point2], normal: Point2, c: f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(subject.len() + 1);
    let n = subject.len();
    for i in 0..n {
        let a = subject[i];
        let b = subject[(i + 1) % n];
        let da = normal.dot(a) - c;
        let db = normal.dot(b) - c;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0) != (db < 0.0) && da != db {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Cover a polygon by a convex polygon with at most `max_vertices` vertices,
/// leaving at least `margin` of clearance everywhere.
///
/// Convex inputs that already satisfy the vertex budget are kept as they are
/// (miter-offset when `margin > 0`, returned unchanged when `margin == 0`).
/// Otherwise the cover is the intersection of `max_vertices` supporting
/// half-planes of the hull, each pushed out by `margin`.
pub fn dilate_and_simplify(
    poly: &Polygon,
    margin: f64,
    max_vertices: usize,
) -> Result<Polygon, GeometryError> {
    if max_vertices < 3 {
        return Err(GeometryError::VertexBudgetTooSmall { max_vertices });
    }
    if !(margin >= 0.0) {
        return Err(GeometryError::NegativeMargin { margin });
    }

    if poly.is_convex() && poly.len() <= max_vertices {
        if margin == 0.0 {
            return Ok(poly.clone());
        }
        return Polygon::new(miter_offset(poly.vertices(), margin));
    }

    let hull = convex_hull(poly.vertices());
    if hull.len() <= max_vertices && hull.len() >= 3 {
        return Polygon::new(miter_offset(&hull, margin));
    }

    // Supporting half-planes in k evenly spaced directions at phase pi/k.
    let k = max_vertices;
    let centroid = poly.centroid();
    let radius = poly
        .vertices()
        .iter()
        .map(|v| v.dist(centroid))
        .fold(0.0, f64::max);
    let half = 8.0 * (radius + margin) + 1.0;
    let mut subject = vec![
        centroid + Point2::new(-half, -half),
        centroid + Point2::new(half, -half),
        centroid + Point2::new(half, half),
        centroid + Point2::new(-half, half),
    ];
    for i in 0..k {
        let phi = std::f64::consts::PI * (2 * i + 1) as f64 / k as f64;
        let normal = Point2::from_heading(phi);
        let support = hull
            .iter()
            .map(|v| normal.dot(*v))
            .fold(f64::NEG_INFINITY, f64::max);
        subject = clip_halfplane(&subject, normal, support + margin);
        if subject.len() < 3 {
            return Err(GeometryError::SimplificationCollapsed { max_vertices });
        }
    }
    subject.dedup_by(|a, b| a.dist(*b) <= 1e-9);
    if subject.len() >= 2 && subject[0].dist(subject[subject.len() - 1]) <= 1e-9 {
        subject.pop();
    }
    Polygon::new(subject)
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
    fn square_offsets_are_diagonal() {
        let nodes = offset_nodes(&unit_square(), 0.1).unwrap();
        assert_eq!(nodes.len(), 4);
        let r = 0.1 / 2.0_f64.sqrt();
        let expected = [
            Point2::new(-r, -r),
            Point2::new(1.0 + r, -r),
            Point2::new(1.0 + r, 1.0 + r),
            Point2::new(-r, 1.0 + r),
        ];
        for (got, want) in nodes.iter().zip(expected.iter()) {
            assert!(got.dist(*want) < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn equilateral_triangle_nodes_at_distance_d() {
        let tri = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3.0_f64.sqrt() / 2.0),
        ])
        .unwrap();
        let d = 0.25;
        let nodes = offset_nodes(&tri, d).unwrap();
        assert_eq!(nodes.len(), 3);
        for (node, v) in nodes.iter().zip(tri.vertices()) {
            assert!((node.dist(*v) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn reflex_vertex_is_skipped() {
        // L-shaped hexagon: one reflex corner at (1, 1).
        let l_shape = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        let nodes = offset_nodes_indexed(&l_shape, 0.1).unwrap();
        assert_eq!(nodes.len(), 5);
        assert!(nodes.iter().all(|(i, _)| *i != 3));
    }

    #[test]
    fn nonpositive_offset_rejected() {
        assert!(offset_nodes(&unit_square(), 0.0).is_err());
        assert!(offset_nodes(&unit_square(), -1.0).is_err());
    }

    #[test]
    fn dilate_identity_on_convex_input() {
        let sq = unit_square();
        let out = dilate_and_simplify(&sq, 0.0, 4).unwrap();
        assert_eq!(out.vertices(), sq.vertices());
    }

    #[test]
    fn dilate_square_by_half() {
        let out = dilate_and_simplify(&unit_square(), 0.5, 4).unwrap();
        let mut vs = out.vertices().to_vec();
        vs.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
        let expected = [
            Point2::new(-0.5, -0.5),
            Point2::new(-0.5, 1.5),
            Point2::new(1.5, -0.5),
            Point2::new(1.5, 1.5),
        ];
        assert_eq!(vs.len(), 4);
        for (got, want) in vs.iter().zip(expected.iter()) {
            assert!(got.dist(*want) < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn simplify_20_gon_to_6() {
        let p = super::super::polygon::regular_polygon(Point2::new(0.0, 0.0), 10.0, 20, 0.1)
            .unwrap();
        let out = dilate_and_simplify(&p, 0.0, 6).unwrap();
        assert!(out.len() <= 6);
        for v in p.vertices() {
            // Original vertices sit inside or on the cover.
            assert!(out.contains(*v) || out.distance_to_point(*v) < 1e-9);
        }
    }

    #[test]
    fn vertex_budget_below_three_rejected() {
        assert!(dilate_and_simplify(&unit_square(), 0.0, 2).is_err());
    }
}
