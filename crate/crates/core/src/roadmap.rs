//! Visibility-graph roadmap over offset nodes.
//!
//! Nodes sit at a fixed offset from convex obstacle vertices; an edge joins
//! two nodes when the connecting segment stays clear of every obstacle and
//! inside the environment boundary. The adjacency is a dense symmetric
//! matrix of Euclidean edge lengths, which is a comfortable fit for the few
//! dozen nodes a feature map produces. A finished graph is immutable and
//! safe to query from many threads.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::geometry::{
    offset_nodes_indexed, point_in_polygon, EnvironmentMap, Point2, DEFAULT_EPS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoadmapError {
    #[error("obstacles produced no usable roadmap nodes (offset {d} mm)")]
    NoUsableNodes { d: f64 },
    #[error("point {at} lies inside obstacle {obstacle}")]
    PointInObstacle { at: Point2, obstacle: usize },
    #[error("point {at} lies outside the environment boundary")]
    PointOutsideBoundary { at: Point2 },
    #[error("node index {index} out of range for {nodes} nodes")]
    InvalidNodeIndex { index: usize, nodes: usize },
}

/// Where a node came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeProvenance {
    /// Offset from vertex `vertex` of obstacle `obstacle`.
    ObstacleVertex { obstacle: usize, vertex: usize },
    /// Free point inserted afterwards (start or end attachment).
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadmapNode {
    pub position: Point2,
    pub provenance: NodeProvenance,
}

/// Dense symmetric adjacency; absent edges are stored as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    n: usize,
    weights: Vec<f64>,
}

impl AdjacencyMatrix {
    fn new(n: usize) -> Self {
        Self { n, weights: vec![0.0; n * n] }
    }

    fn grow(&mut self) {
        let n = self.n + 1;
        let mut weights = vec![0.0; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                weights[i * n + j] = self.weights[i * self.n + j];
            }
        }
        self.n = n;
        self.weights = weights;
    }

    fn set(&mut self, i: usize, j: usize, w: f64) {
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Edge weight, or `None` when no edge is present.
    pub fn edge(&self, i: usize, j: usize) -> Option<f64> {
        let w = self.weights[i * self.n + j];
        (i != j && w > 0.0).then_some(w)
    }

    /// Row-major copy for serialization and debugging.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.weights[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadmapGraph {
    nodes: Vec<RoadmapNode>,
    adjacency: AdjacencyMatrix,
    offset_d: f64,
}

/// A shortest path through the roadmap.
#[derive(Debug, Clone, PartialEq)]
pub struct PathFound {
    pub nodes: Vec<usize>,
    pub length: f64,
}

fn usable_position(env: &EnvironmentMap, p: Point2) -> bool {
    point_in_polygon(p, env.boundary())
        && env.obstacles().iter().all(|o| !point_in_polygon(p, o))
}

/// Build the roadmap for an environment with offset `d`.
///
/// Offset nodes that fall outside the boundary or inside another obstacle
/// are discarded. An environment without obstacles yields an empty graph;
/// obstacles whose nodes are all discarded are an error because nothing can
/// be planned around them.
pub fn build_roadmap(env: &EnvironmentMap, d: f64) -> Result<RoadmapGraph, RoadmapError> {
    let mut nodes = Vec::new();
    for (obs_idx, obs) in env.obstacles().iter().enumerate() {
        let offsets = offset_nodes_indexed(obs, d)
            .map_err(|_| RoadmapError::NoUsableNodes { d })?;
        for (vertex, position) in offsets {
            if usable_position(env, position) {
                nodes.push(RoadmapNode {
                    position,
                    provenance: NodeProvenance::ObstacleVertex { obstacle: obs_idx, vertex },
                });
            }
        }
    }
    if nodes.is_empty() && !env.obstacles().is_empty() {
        return Err(RoadmapError::NoUsableNodes { d });
    }

    let mut adjacency = AdjacencyMatrix::new(nodes.len());
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (a, b) = (nodes[i].position, nodes[j].position);
            if env.sight_clear(a, b, DEFAULT_EPS) {
                adjacency.set(i, j, a.dist(b));
            }
        }
    }
    Ok(RoadmapGraph { nodes, adjacency, offset_d: d })
}

impl RoadmapGraph {
    /// Empty graph, useful as a base for free-point insertion.
    pub fn empty(offset_d: f64) -> Self {
        Self {
            nodes: Vec::new(),
            adjacency: AdjacencyMatrix::new(0),
            offset_d,
        }
    }

    pub fn nodes(&self) -> &[RoadmapNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adjacency
    }

    pub fn offset_d(&self) -> f64 {
        self.offset_d
    }

    pub fn position(&self, index: usize) -> Result<Point2, RoadmapError> {
        self.nodes
            .get(index)
            .map(|n| n.position)
            .ok_or(RoadmapError::InvalidNodeIndex { index, nodes: self.nodes.len() })
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<f64> {
        self.adjacency.edge(i, j)
    }

    /// Append a free point, connecting it to every node it can see.
    /// Existing edges are untouched. Returns the new node's index.
    pub fn insert_point(
        &mut self,
        env: &EnvironmentMap,
        p: Point2,
    ) -> Result<usize, RoadmapError> {
        for (i, obs) in env.obstacles().iter().enumerate() {
            if point_in_polygon(p, obs) {
                return Err(RoadmapError::PointInObstacle { at: p, obstacle: i });
            }
        }
        if !point_in_polygon(p, env.boundary()) {
            return Err(RoadmapError::PointOutsideBoundary { at: p });
        }
        let index = self.nodes.len();
        self.nodes.push(RoadmapNode { position: p, provenance: NodeProvenance::Free });
        self.adjacency.grow();
        for j in 0..index {
            let q = self.nodes[j].position;
            if env.sight_clear(p, q, DEFAULT_EPS) {
                self.adjacency.set(index, j, p.dist(q));
            }
        }
        Ok(index)
    }

    /// Dijkstra from `a` to `b`. `Ok(None)` when disconnected. Ties between
    /// equal-length paths break toward the lower predecessor index, so the
    /// result is reproducible.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Option<PathFound>, RoadmapError> {
        self.shortest_path_with(a, b, |_| true)
    }

    /// Shortest path restricted to intermediate nodes accepted by `allowed`.
    /// The endpoints are always permitted.
    pub fn shortest_path_with(
        &self,
        a: usize,
        b: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> Result<Option<PathFound>, RoadmapError> {
        let n = self.nodes.len();
        for idx in [a, b] {
            if idx >= n {
                return Err(RoadmapError::InvalidNodeIndex { index: idx, nodes: n });
            }
        }
        if a == b {
            return Ok(Some(PathFound { nodes: vec![a], length: 0.0 }));
        }

        #[derive(PartialEq)]
        struct Entry {
            cost: f64,
            node: usize,
        }
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> Ordering {
                // Min-heap on (cost, node index).
                other
                    .cost
                    .partial_cmp(&self.cost)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| other.node.cmp(&self.node))
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[a] = 0.0;
        heap.push(Entry { cost: 0.0, node: a });

        while let Some(Entry { cost, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            if node == b {
                break;
            }
            for next in 0..n {
                if next != b && next != a && !allowed(next) {
                    continue;
                }
                let Some(w) = self.adjacency.edge(node, next) else { continue };
                let candidate = cost + w;
                if candidate < dist[next]
                    || (candidate == dist[next] && node < parent[next])
                {
                    dist[next] = candidate;
                    parent[next] = node;
                    heap.push(Entry { cost: candidate, node: next });
                }
            }
        }

        if !dist[b].is_finite() {
            return Ok(None);
        }
        let mut nodes = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            nodes.push(cur);
        }
        nodes.reverse();
        Ok(Some(PathFound { nodes, length: dist[b] }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Polygon};

    fn bounds() -> Polygon {
        rectangle(Point2::new(-10.0, -10.0), Point2::new(10.0, 10.0)).unwrap()
    }

    fn unit_square_env() -> EnvironmentMap {
        let square = rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        EnvironmentMap::new("one-square", bounds(), vec![square]).unwrap()
    }

    #[test]
    fn square_roadmap_has_four_perimeter_edges() {
        let g = build_roadmap(&unit_square_env(), 0.1).unwrap();
        assert_eq!(g.len(), 4);
        let mut edges = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if g.edge(i, j).is_some() {
                    edges += 1;
                }
            }
        }
        // Diagonals cross the square, perimeter sight lines do not.
        assert_eq!(edges, 4);
        assert!(g.edge(0, 2).is_none());
        assert!(g.edge(1, 3).is_none());
    }

    #[test]
    fn empty_environment_gives_empty_graph() {
        let env = EnvironmentMap::new("empty", bounds(), vec![]).unwrap();
        let g = build_roadmap(&env, 0.5).unwrap();
        assert_eq!(g.len(), 0);
    }

    #[test]
    fn node_count_is_sum_of_convex_vertices() {
        let square = rectangle(Point2::new(-3.0, -3.0), Point2::new(-1.0, -1.0)).unwrap();
        let tri = Polygon::new(vec![
            Point2::new(2.0, 2.0),
            Point2::new(4.0, 2.0),
            Point2::new(3.0, 4.0),
        ])
        .unwrap();
        let env = EnvironmentMap::new("mix", bounds(), vec![square, tri]).unwrap();
        let g = build_roadmap(&env, 0.2).unwrap();
        assert_eq!(g.len(), 7);
    }

    #[test]
    fn nodes_pushed_out_of_bounds_are_discarded() {
        let square = rectangle(Point2::new(-9.5, -9.5), Point2::new(9.5, 9.5)).unwrap();
        let env = EnvironmentMap::new("tight", bounds(), vec![square]).unwrap();
        // d = 2 pushes every offset node outside the boundary.
        assert!(matches!(
            build_roadmap(&env, 2.0),
            Err(RoadmapError::NoUsableNodes { .. })
        ));
    }

    #[test]
    fn insert_into_empty_graph() {
        let env = EnvironmentMap::new("empty", bounds(), vec![]).unwrap();
        let mut g = build_roadmap(&env, 0.5).unwrap();
        let idx = g.insert_point(&env, Point2::new(0.0, 0.0)).unwrap();
        assert_eq!(idx, 0);
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn two_visible_points_gain_one_edge() {
        let env = EnvironmentMap::new("empty", bounds(), vec![]).unwrap();
        let mut g = build_roadmap(&env, 0.5).unwrap();
        let a = g.insert_point(&env, Point2::new(-5.0, 0.0)).unwrap();
        let b = g.insert_point(&env, Point2::new(5.0, 0.0)).unwrap();
        assert!((g.edge(a, b).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn hidden_point_gets_no_edge_through_obstacle() {
        let env = unit_square_env();
        let mut g = build_roadmap(&env, 0.1).unwrap();
        let a = g.insert_point(&env, Point2::new(0.5, -3.0)).unwrap();
        let b = g.insert_point(&env, Point2::new(0.5, 3.0)).unwrap();
        assert!(g.edge(a, b).is_none());
    }

    #[test]
    fn insert_rejections_name_the_constraint() {
        let env = unit_square_env();
        let mut g = build_roadmap(&env, 0.1).unwrap();
        assert!(matches!(
            g.insert_point(&env, Point2::new(0.5, 0.5)),
            Err(RoadmapError::PointInObstacle { obstacle: 0, .. })
        ));
        assert!(matches!(
            g.insert_point(&env, Point2::new(50.0, 0.0)),
            Err(RoadmapError::PointOutsideBoundary { .. })
        ));
    }

    #[test]
    fn shortest_path_trivial_and_single_edge() {
        let env = EnvironmentMap::new("empty", bounds(), vec![]).unwrap();
        let mut g = build_roadmap(&env, 0.5).unwrap();
        let a = g.insert_point(&env, Point2::new(0.0, 0.0)).unwrap();
        let b = g.insert_point(&env, Point2::new(5.0, 0.0)).unwrap();
        let same = g.shortest_path(a, a).unwrap().unwrap();
        assert_eq!(same.nodes, vec![a]);
        assert_eq!(same.length, 0.0);
        let path = g.shortest_path(a, b).unwrap().unwrap();
        assert_eq!(path.nodes, vec![a, b]);
        assert!((path.length - 5.0).abs() < 1e-12);
    }

    #[test]
    fn opposite_corners_go_around_the_square() {
        let g = build_roadmap(&unit_square_env(), 0.1).unwrap();
        // Corners 0 and 2 are diagonal; the path must take two perimeter
        // edges of equal length.
        let path = g.shortest_path(0, 2).unwrap().unwrap();
        assert_eq!(path.nodes.len(), 3);
        let side = g.position(0).unwrap().dist(g.position(1).unwrap());
        assert!((path.length - 2.0 * side).abs() < 1e-9);
    }

    #[test]
    fn disconnected_pair_is_not_an_error() {
        let env = unit_square_env();
        let g = build_roadmap(&env, 0.1).unwrap();
        // A point boxed in by the corner of the map with the square blocking
        // it is still visible around the square, so build a trivial
        // disconnected case instead: fresh graph, no edges.
        let mut iso = RoadmapGraph::empty(0.1);
        let a = iso.insert_point(&env, Point2::new(0.5, -3.0)).unwrap();
        let b = iso.insert_point(&env, Point2::new(0.5, 3.0)).unwrap();
        assert_eq!(iso.shortest_path(a, b).unwrap(), None);
        // And invalid indices are errors, not panics.
        assert!(g.shortest_path(0, 99).is_err());
    }

    #[test]
    fn determinism_of_build() {
        let env = unit_square_env();
        let a = build_roadmap(&env, 0.1).unwrap();
        let b = build_roadmap(&env, 0.1).unwrap();
        assert_eq!(a, b);
    }
}
