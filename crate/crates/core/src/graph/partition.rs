use crate::error::{Error, Result};
use crate::graph::{DegreeBounds, Graph};

/// Three-way vertex split (X1, X2, X3) in which X2 separates X1 from X3:
/// no edge joins X1 and X3 directly, and every X2 node touches both sides.
/// The parts need not induce connected subgraphs.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub x3: Vec<usize>,
}

impl Partition {
    pub fn new(g: &Graph, x1: Vec<usize>, x2: Vec<usize>, x3: Vec<usize>) -> Result<Partition> {
        let p = Partition { x1, x2, x3 };
        p.validate(g)?;
        Ok(p)
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.x1.len(), self.x2.len(), self.x3.len())
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.node_count();
        if self.x1.is_empty() || self.x3.is_empty() {
            return Err(Error::InvalidPartition("X1 and X3 must be nonempty".into()));
        }
        let mut label = vec![0u8; n];
        let mut assigned = 0usize;
        for (part, nodes) in [(1u8, &self.x1), (2, &self.x2), (3, &self.x3)] {
            for &v in nodes.iter() {
                if v >= n {
                    return Err(Error::InvalidNode {
                        id: v,
                        node_count: n,
                    });
                }
                if label[v] != 0 {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} assigned to more than one part"
                    )));
                }
                label[v] = part;
                assigned += 1;
            }
        }
        if assigned != n {
            return Err(Error::InvalidPartition(
                "parts do not cover the vertex set".into(),
            ));
        }
        for &(a, b, _) in g.edges() {
            if (label[a] == 1 && label[b] == 3) || (label[a] == 3 && label[b] == 1) {
                return Err(Error::InvalidPartition(format!(
                    "edge ({a}, {b}) connects X1 and X3 directly"
                )));
            }
        }
        for &v in &self.x2 {
            let mut has1 = false;
            let mut has3 = false;
            for &(u, _) in g.neighbors(v) {
                match label[u] {
                    1 => has1 = true,
                    3 => has3 = true,
                    _ => {}
                }
            }
            if !has1 || !has3 {
                return Err(Error::InvalidPartition(format!(
                    "X2 node {v} lacks a neighbor in {}",
                    if has1 { "X3" } else { "X1" }
                )));
            }
        }
        Ok(())
    }
}

/// Canonical bottleneck partition grown from a seed set: X2 is the vertex
/// boundary of X1 and X3 is the remainder. Boundary nodes with no neighbor
/// in the remainder are absorbed into X1 and the boundary recomputed, so the
/// result always satisfies both separator conditions.
pub fn find_partition_boundary(g: &Graph, x1_seed: &[usize]) -> Result<Partition> {
    if x1_seed.is_empty() {
        return Err(Error::InvalidInput("X1 seed must be nonempty".into()));
    }
    let n = g.node_count();
    for &v in x1_seed {
        if v >= n {
            return Err(Error::InvalidNode {
                id: v,
                node_count: n,
            });
        }
    }
    let mut in_x1 = vec![false; n];
    for &v in x1_seed {
        in_x1[v] = true;
    }
    loop {
        let x1: Vec<usize> = (0..n).filter(|&v| in_x1[v]).collect();
        let x2 = g.boundary(&x1);
        let mut in_x2 = vec![false; n];
        for &v in &x2 {
            in_x2[v] = true;
        }
        let x3: Vec<usize> = (0..n).filter(|&v| !in_x1[v] && !in_x2[v]).collect();
        if x3.is_empty() {
            return Err(Error::EmptyX3);
        }
        let mut in_x3 = vec![false; n];
        for &v in &x3 {
            in_x3[v] = true;
        }
        let absorbed: Vec<usize> = x2
            .iter()
            .copied()
            .filter(|&v| !g.neighbors(v).iter().any(|&(u, _)| in_x3[u]))
            .collect();
        if absorbed.is_empty() {
            return Partition::new(g, x1, x2, x3);
        }
        for v in absorbed {
            in_x1[v] = true;
        }
    }
}

/// The two Rayleigh-quotient bounds on the algebraic connectivity implied by
/// a bottleneck partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottleneckBound {
    /// `(N3^2 d12 + N1^2 d32) / (N3^2 N1 + N1^2 N3)` with the actual cut
    /// weights `d12` (X1 to X2) and `d32` (X3 to X2).
    pub exact: f64,
    /// The closed form `q * w_max * N2 / min(N1, N3)`.
    pub loose: f64,
    pub d12: f64,
    pub d32: f64,
}

/// Evaluate both bottleneck bounds for a valid partition. When the graph
/// satisfies `bounds`, `exact <= loose` and `lambda_2 <= exact`.
pub fn bottleneck_bound(g: &Graph, p: &Partition, bounds: &DegreeBounds) -> Result<BottleneckBound> {
    p.validate(g)?;
    let n = g.node_count();
    let mut label = vec![0u8; n];
    for &v in &p.x1 {
        label[v] = 1;
    }
    for &v in &p.x2 {
        label[v] = 2;
    }
    for &v in &p.x3 {
        label[v] = 3;
    }
    let mut d12 = 0.0;
    let mut d32 = 0.0;
    for &(a, b, w) in g.edges() {
        match (label[a], label[b]) {
            (1, 2) | (2, 1) => d12 += w,
            (3, 2) | (2, 3) => d32 += w,
            _ => {}
        }
    }
    let (n1, n2, n3) = (p.x1.len() as f64, p.x2.len() as f64, p.x3.len() as f64);
    let exact = (n3 * n3 * d12 + n1 * n1 * d32) / (n3 * n3 * n1 + n1 * n1 * n3);
    let loose = bounds.q as f64 * bounds.w_max * n2 / n1.min(n3);
    Ok(BottleneckBound {
        exact,
        loose,
        d12,
        d32,
    })
}

/// Every valid (X1, X2, X3) partition of a small graph, by exhaustive
/// 3-coloring. Intended for desk-scale verification; refuses N > 12.
pub fn enumerate_partitions(g: &Graph, label_cap: usize) -> Result<Vec<Partition>> {
    let n = g.node_count();
    if n > label_cap || n > 12 {
        return Err(Error::InvalidInput(format!(
            "partition enumeration is 3^N; N={n} exceeds the cap"
        )));
    }
    let total: usize = 3usize.pow(n as u32);
    let mut out = Vec::new();
    let mut label = vec![0u8; n];
    for code in 0..total {
        let mut c = code;
        for slot in label.iter_mut() {
            *slot = (c % 3) as u8 + 1;
            c /= 3;
        }
        let x1: Vec<usize> = (0..n).filter(|&v| label[v] == 1).collect();
        let x2: Vec<usize> = (0..n).filter(|&v| label[v] == 2).collect();
        let x3: Vec<usize> = (0..n).filter(|&v| label[v] == 3).collect();
        let candidate = Partition { x1, x2, x3 };
        if candidate.validate(g).is_ok() {
            out.push(candidate);
        }
    }
    Ok(out)
}
