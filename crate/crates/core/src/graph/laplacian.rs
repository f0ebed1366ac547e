use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::SymMatrix;

/// Weighted graph Laplacian: `L(i,i) = sum_k w_ik`, `L(i,j) = -w_ij` for
/// edges, 0 otherwise. Rows sum to zero by construction.
pub fn build_laplacian(g: &Graph) -> SymMatrix {
    let n = g.node_count();
    let mut m = SymMatrix::zeros(n);
    for &(a, b, w) in g.edges() {
        m.set(a, b, -w);
        m.add_to(a, a, w);
        m.add_to(b, b, w);
    }
    m
}

/// Grounded Laplacian: the principal submatrix of `L` with the leader's row
/// and column removed. Positive definite whenever the graph is connected.
pub fn grounded_laplacian(g: &Graph, leader: usize) -> Result<SymMatrix> {
    if !g.has_node(leader) {
        return Err(Error::InvalidNode {
            id: leader,
            node_count: g.node_count(),
        });
    }
    Ok(build_laplacian(g).principal_submatrix(&[leader]))
}

/// Degree-normalized Laplacian `D^{-1/2} L D^{-1/2}`; eigenvalues lie in
/// `[0, 2]`. Isolated nodes are rejected.
pub fn normalized_laplacian(g: &Graph) -> Result<SymMatrix> {
    let n = g.node_count();
    let mut inv_sqrt = vec![0.0; n];
    for i in 0..n {
        let d = g.weighted_degree(i);
        if d <= 0.0 {
            return Err(Error::InvalidGraph(format!(
                "node {i} is isolated; normalized Laplacian undefined"
            )));
        }
        inv_sqrt[i] = 1.0 / d.sqrt();
    }
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, 1.0);
    }
    for &(a, b, w) in g.edges() {
        m.set(a, b, -w * inv_sqrt[a] * inv_sqrt[b]);
    }
    Ok(m)
}
