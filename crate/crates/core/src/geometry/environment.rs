use super::point::Point2;
use super::polygon::Polygon;
use super::predicates::{point_in_polygon, segments_touch, DEFAULT_EPS};
use super::GeometryError;

/// The planner's world model: a boundary polygon and the obstacles inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentMap {
    name: String,
    boundary: Polygon,
    obstacles: Vec<Polygon>,
}

impl EnvironmentMap {
    /// Validate and assemble an environment.
    ///
    /// Every obstacle vertex must lie strictly inside the boundary, obstacle
    /// edges must stay clear of the boundary, and obstacles must be pairwise
    /// disjoint (no edge contact, no containment). The first violation is
    /// reported.
    pub fn new(
        name: impl Into<String>,
        boundary: Polygon,
        obstacles: Vec<Polygon>,
    ) -> Result<Self, GeometryError> {
        for (i, obs) in obstacles.iter().enumerate() {
            check_inside_boundary(obs, &boundary, i)?;
        }
        for i in 0..obstacles.len() {
            for j in (i + 1)..obstacles.len() {
                check_disjoint(&obstacles[i], &obstacles[j], i, j)?;
            }
        }
        Ok(Self {
            name: name.into(),
            boundary,
            obstacles,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn boundary(&self) -> &Polygon {
        &self.boundary
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    /// New environment with obstacle `index` translated by `delta`,
    /// revalidating all invariants.
    pub fn with_obstacle_translated(
        &self,
        index: usize,
        delta: Point2,
    ) -> Result<Self, GeometryError> {
        if index >= self.obstacles.len() {
            return Err(GeometryError::NoSuchObstacle { index });
        }
        let mut obstacles = self.obstacles.clone();
        obstacles[index] = obstacles[index].translated(delta);
        Self::new(self.name.clone(), self.boundary.clone(), obstacles)
    }

    /// Is the open sight line from `a` to `b` collision-free? True when the
    /// segment touches no obstacle (conservative `eps` contact) and does not
    /// cross the boundary ring.
    pub fn sight_clear(&self, a: Point2, b: Point2, eps: f64) -> bool {
        if a == b {
            return false;
        }
        for obs in &self.obstacles {
            if super::predicates::segment_hits_polygon(a, b, obs, eps) {
                return false;
            }
        }
        for (ba, bb) in self.boundary.edges() {
            if segments_touch(a, b, ba, bb, eps) {
                return false;
            }
        }
        true
    }

    /// Replace every obstacle through a mapping, revalidating invariants.
    pub fn map_obstacles(
        &self,
        mut f: impl FnMut(&Polygon) -> Result<Polygon, GeometryError>,
    ) -> Result<Self, GeometryError> {
        let obstacles = self
            .obstacles
            .iter()
            .map(|o| f(o))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.name.clone(), self.boundary.clone(), obstacles)
    }
}

fn check_inside_boundary(
    obs: &Polygon,
    boundary: &Polygon,
    index: usize,
) -> Result<(), GeometryError> {
    for (v_idx, v) in obs.vertices().iter().enumerate() {
        let inside = point_in_polygon(*v, boundary)
            && boundary
                .edges()
                .all(|(a, b)| super::predicates::point_segment_distance(*v, a, b) > DEFAULT_EPS);
        if !inside {
            return Err(GeometryError::ObstacleOutsideBoundary {
                obstacle: index,
                vertex: v_idx,
            });
        }
    }
    // Vertices inside a non-convex boundary do not imply the edges are.
    for (a, b) in obs.edges() {
        for (ba, bb) in boundary.edges() {
            if segments_touch(a, b, ba, bb, DEFAULT_EPS) {
                return Err(GeometryError::ObstacleOutsideBoundary {
                    obstacle: index,
                    vertex: 0,
                });
            }
        }
    }
    Ok(())
}

fn check_disjoint(p: &Polygon, q: &Polygon, i: usize, j: usize) -> Result<(), GeometryError> {
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            if segments_touch(a, b, c, d, DEFAULT_EPS) {
                return Err(GeometryError::ObstaclesOverlap { first: i, second: j });
            }
        }
    }
    // Edge-disjoint but nested.
    if point_in_polygon(p.vertices()[0], q) || point_in_polygon(q.vertices()[0], p) {
        return Err(GeometryError::ObstacleContained { first: i, second: j });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::rectangle;

    fn square_at(cx: f64, cy: f64, half: f64) -> Polygon {
        rectangle(
            Point2::new(cx - half, cy - half),
            Point2::new(cx + half, cy + half),
        )
        .unwrap()
    }

    fn bounds() -> Polygon {
        rectangle(Point2::new(-10.0, -10.0), Point2::new(10.0, 10.0)).unwrap()
    }

    #[test]
    fn valid_environment() {
        let env = EnvironmentMap::new(
            "two-squares",
            bounds(),
            vec![square_at(-3.0, 0.0, 1.0), square_at(3.0, 0.0, 1.0)],
        )
        .unwrap();
        assert_eq!(env.obstacles().len(), 2);
    }

    #[test]
    fn obstacle_outside_boundary_rejected() {
        let r = EnvironmentMap::new("bad", bounds(), vec![square_at(10.5, 0.0, 1.0)]);
        assert!(matches!(
            r,
            Err(GeometryError::ObstacleOutsideBoundary { obstacle: 0, .. })
        ));
    }

    #[test]
    fn overlapping_obstacles_rejected() {
        let r = EnvironmentMap::new(
            "bad",
            bounds(),
            vec![square_at(0.0, 0.0, 1.0), square_at(1.5, 0.0, 1.0)],
        );
        assert!(matches!(
            r,
            Err(GeometryError::ObstaclesOverlap { first: 0, second: 1 })
        ));
    }

    #[test]
    fn contained_obstacle_rejected() {
        let r = EnvironmentMap::new(
            "bad",
            bounds(),
            vec![square_at(0.0, 0.0, 3.0), square_at(0.0, 0.0, 1.0)],
        );
        assert!(matches!(r, Err(GeometryError::ObstacleContained { .. })));
    }

    #[test]
    fn translate_revalidates() {
        let env = EnvironmentMap::new("one", bounds(), vec![square_at(0.0, 0.0, 1.0)]).unwrap();
        assert!(env
            .with_obstacle_translated(0, Point2::new(20.0, 0.0))
            .is_err());
        let moved = env.with_obstacle_translated(0, Point2::new(2.0, 0.0)).unwrap();
        assert!((moved.obstacles()[0].centroid().x - 2.0).abs() < 1e-12);
    }
}
