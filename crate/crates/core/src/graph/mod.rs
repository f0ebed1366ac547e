//! Undirected weighted simple graphs, their Laplacians, degree-bound
//! validation, and bottleneck partitions.

mod edgelist;
mod laplacian;
mod partition;

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list, edge_list_string};
pub use laplacian::{build_laplacian, grounded_laplacian, normalized_laplacian};
pub use partition::{
    bottleneck_bound, enumerate_partitions, find_partition_boundary, BottleneckBound, Partition,
};

use crate::error::{Error, Result};
use std::collections::HashSet;

/// Undirected weighted simple graph with 0-based contiguous node ids.
///
/// Immutable after construction: no self-loops, no duplicate edges, strictly
/// positive finite weights. Edges are stored canonically as `(i, j)` with
/// `i < j`, sorted, so equal graphs have bit-identical edge lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    pub fn from_edges(node_count: usize, edges: &[(usize, usize, f64)]) -> Result<Graph> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        let mut canonical: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(edges.len());
        for &(a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidNode {
                    id: a.max(b),
                    node_count,
                });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
            canonical.push((key.0, key.1, w));
        }
        canonical.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b, w) in &canonical {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        Ok(Graph {
            node_count,
            edges: canonical,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(i, j, w)` edges with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn has_node(&self, node: usize) -> bool {
        node < self.node_count
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|&&(j, _)| j == b)
            .map(|&(_, w)| w)
    }

    /// Number of neighbors of `node`.
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Weighted degree `d_i = sum of incident edge weights`.
    pub fn weighted_degree(&self, node: usize) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).fold(0.0, f64::max)
    }

    pub fn min_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).fold(f64::INFINITY, f64::min)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut visited = vec![false; self.node_count];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adjacency[v] {
                if !visited[u] {
                    visited[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.node_count
    }

    /// Vertex boundary of `set`: nodes outside `set` adjacent to it.
    pub fn boundary(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.node_count];
        for &v in set {
            inside[v] = true;
        }
        let mut out = vec![false; self.node_count];
        for &v in set {
            for &(u, _) in &self.adjacency[v] {
                if !inside[u] {
                    out[u] = true;
                }
            }
        }
        (0..self.node_count).filter(|&v| out[v]).collect()
    }
}

/// Uniform degree and weight bounds for a graph family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeBounds {
    pub q: usize,
    pub w_min: f64,
    pub w_max: f64,
}

impl DegreeBounds {
    pub fn new(q: usize, w_min: f64, w_max: f64) -> Result<DegreeBounds> {
        if q < 1 {
            return Err(Error::InvalidInput("degree bound q must be >= 1".into()));
        }
        if !(w_min > 0.0 && w_min <= w_max && w_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "weight bounds must satisfy 0 < w_min <= w_max < inf, got [{w_min}, {w_max}]"
            )));
        }
        Ok(DegreeBounds { q, w_min, w_max })
    }

    /// The tightest bounds a given graph satisfies: q is its max degree and
    /// the weight window is the observed weight range.
    pub fn observed(g: &Graph) -> Result<DegreeBounds> {
        if g.edge_count() == 0 {
            return Err(Error::InvalidGraph("graph has no edges".into()));
        }
        DegreeBounds::new(g.max_degree(), g.min_weight(), g.max_weight())
    }
}

/// Nodes and edges violating the degree/weight assumptions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssumptionReport {
    /// Nodes with more than `q` neighbors, with their degree.
    pub degree_violations: Vec<(usize, usize)>,
    /// Edges with weight outside `[w_min, w_max]`.
    pub weight_violations: Vec<(usize, usize, f64)>,
}

impl AssumptionReport {
    pub fn is_compliant(&self) -> bool {
        self.degree_violations.is_empty() && self.weight_violations.is_empty()
    }
}

/// Check every node against the degree cap and every edge against the weight
/// window. An empty report means the graph satisfies the bounds.
pub fn validate_assumptions(g: &Graph, bounds: &DegreeBounds) -> AssumptionReport {
    let mut report = AssumptionReport::default();
    for node in 0..g.node_count() {
        let deg = g.degree(node);
        if deg > bounds.q {
            report.degree_violations.push((node, deg));
        }
    }
    for &(a, b, w) in g.edges() {
        if w < bounds.w_min || w > bounds.w_max {
            report.weight_violations.push((a, b, w));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_self_loops_duplicates_bad_weights() {
        assert!(Graph::from_edges(2, &[(0, 0, 1.0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1, 0.0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1, -1.0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1, f64::NAN)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn symmetric_weight_lookup() {
        let g = Graph::from_edges(2, &[(1, 0, 2.5)]).unwrap();
        assert_eq!(g.weight(0, 1), Some(2.5));
        assert_eq!(g.weight(1, 0), Some(2.5));
        assert_eq!(g.weight(0, 0), None);
    }

    #[test]
    fn connectivity_check() {
        assert!(path3().is_connected());
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn boundary_of_path_end() {
        let g = path3();
        assert_eq!(g.boundary(&[0]), vec![1]);
        assert_eq!(g.boundary(&[0, 1]), vec![2]);
        assert_eq!(g.boundary(&[0, 1, 2]), Vec::<usize>::new());
    }

    #[test]
    fn torus_is_compliant_at_q4() {
        let g = crate::generators::generate(
            &crate::generators::FamilySpec::new(crate::generators::FamilyKind::Lattice2dTorus {
                rows: None,
                cols: None,
            }),
            16,
        )
        .unwrap();
        let b = DegreeBounds::new(4, 1.0, 1.0).unwrap();
        assert!(validate_assumptions(&g, &b).is_compliant());
    }

    #[test]
    fn star_center_violates_degree_bound() {
        // Star on 6 nodes: center degree 5 > q = 4.
        let edges: Vec<(usize, usize, f64)> = (1..6).map(|i| (0, i, 1.0)).collect();
        let g = Graph::from_edges(6, &edges).unwrap();
        let b = DegreeBounds::new(4, 0.5, 1.5).unwrap();
        let report = validate_assumptions(&g, &b);
        assert_eq!(report.degree_violations, vec![(0, 5)]);
        assert!(report.weight_violations.is_empty());
    }

    #[test]
    fn low_weight_edge_is_listed() {
        let g = Graph::from_edges(2, &[(0, 1, 0.05)]).unwrap();
        let b = DegreeBounds::new(4, 0.1, 1.0).unwrap();
        let report = validate_assumptions(&g, &b);
        assert_eq!(report.weight_violations, vec![(0, 1, 0.05)]);
    }

    #[test]
    fn observed_bounds_are_tight() {
        let g = Graph::from_edges(3, &[(0, 1, 0.5), (1, 2, 2.0)]).unwrap();
        let b = DegreeBounds::observed(&g).unwrap();
        assert_eq!(b.q, 2);
        assert_eq!(b.w_min, 0.5);
        assert_eq!(b.w_max, 2.0);
        assert!(validate_assumptions(&g, &b).is_compliant());
    }
}
