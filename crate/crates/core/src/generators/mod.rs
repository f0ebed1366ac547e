//! Constructors for the graph families under comparison. Deterministic kinds
//! are pure functions of their parameters; random kinds are pure functions of
//! (parameters, seed) with a ChaCha8 stream, so identical specs reproduce
//! bit-identical edge sets.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Default cap on configuration-model rejection rounds.
pub const DEFAULT_RETRY_CAP: usize = 10_000;

/// Graph family selector with kind-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    Path,
    Ring,
    Star,
    Complete,
    /// Periodic 2D lattice; every node has degree exactly 4. Dimensions
    /// default to sqrt(N) x sqrt(N) when not given.
    Lattice2dTorus {
        rows: Option<usize>,
        cols: Option<usize>,
    },
    BinaryTree,
    /// Two cliques of equal size joined through `bridge_nodes` two-degree
    /// bridge nodes; clique size is derived from N.
    Barbell {
        bridge_nodes: usize,
    },
    /// k-regular graph sampled with the configuration model.
    RandomRegular {
        k: usize,
    },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Ring => "ring",
            FamilyKind::Star => "star",
            FamilyKind::Complete => "complete",
            FamilyKind::Lattice2dTorus { .. } => "lattice2d_torus",
            FamilyKind::BinaryTree => "binary_tree",
            FamilyKind::Barbell { .. } => "barbell",
            FamilyKind::RandomRegular { .. } => "random_regular",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, FamilyKind::RandomRegular { .. })
    }
}

/// A fully specified family member generator: kind, seed (ignored by the
/// deterministic kinds), and the uniform edge weight.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub seed: u64,
    pub weight: f64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> FamilySpec {
        FamilySpec {
            kind,
            seed: 0,
            weight: 1.0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> FamilySpec {
        self.seed = seed;
        self
    }

    pub fn with_weight(mut self, weight: f64) -> FamilySpec {
        self.weight = weight;
        self
    }
}

/// Generate a member of the family with `n` nodes.
pub fn generate(spec: &FamilySpec, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InfeasibleFamily("N must be positive".into()));
    }
    let w = spec.weight;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InfeasibleFamily(format!("weight {w} must be positive")));
    }
    match spec.kind {
        FamilyKind::Path => {
            require(n >= 2, "path needs N >= 2")?;
            Graph::from_edges(n, &chain(n, w))
        }
        FamilyKind::Ring => {
            require(n >= 3, "ring needs N >= 3")?;
            let mut edges = chain(n, w);
            edges.push((0, n - 1, w));
            Graph::from_edges(n, &edges)
        }
        FamilyKind::Star => {
            require(n >= 2, "star needs N >= 2")?;
            let edges: Vec<_> = (1..n).map(|i| (0, i, w)).collect();
            Graph::from_edges(n, &edges)
        }
        FamilyKind::Complete => {
            require(n >= 2, "complete graph needs N >= 2")?;
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    edges.push((i, j, w));
                }
            }
            Graph::from_edges(n, &edges)
        }
        FamilyKind::Lattice2dTorus { rows, cols } => {
            let (r, c) = match (rows, cols) {
                (Some(r), Some(c)) => (r, c),
                (None, None) => {
                    let side = (n as f64).sqrt().round() as usize;
                    require(side * side == n, "torus size must be a perfect square")?;
                    (side, side)
                }
                _ => {
                    return Err(Error::InfeasibleFamily(
                        "torus needs both rows and cols (or neither)".into(),
                    ))
                }
            };
            require(r * c == n, "torus rows*cols must equal N")?;
            require(r >= 3 && c >= 3, "torus needs rows, cols >= 3 for 4-regularity")?;
            let at = |i: usize, j: usize| i * c + j;
            let mut edges = Vec::with_capacity(2 * n);
            for i in 0..r {
                for j in 0..c {
                    edges.push((at(i, j), at(i, (j + 1) % c), w));
                    edges.push((at(i, j), at((i + 1) % r, j), w));
                }
            }
            Graph::from_edges(n, &edges)
        }
        FamilyKind::BinaryTree => {
            require(n >= 2, "tree needs N >= 2")?;
            let mut edges = Vec::with_capacity(n - 1);
            for i in 0..n {
                for child in [2 * i + 1, 2 * i + 2] {
                    if child < n {
                        edges.push((i, child, w));
                    }
                }
            }
            Graph::from_edges(n, &edges)
        }
        FamilyKind::Barbell { bridge_nodes } => {
            let b = bridge_nodes;
            require(b >= 1, "barbell needs at least one bridge node")?;
            require(
                n > b && (n - b) % 2 == 0,
                "barbell needs N = 2m + b with integer clique size m",
            )?;
            generate_barbell((n - b) / 2, b, w)
        }
        FamilyKind::RandomRegular { k } => {
            random_regular_detailed(n, k, w, spec.seed, DEFAULT_RETRY_CAP)
        }
    }
}

fn chain(n: usize, w: f64) -> Vec<(usize, usize, f64)> {
    (0..n - 1).map(|i| (i, i + 1, w)).collect()
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InfeasibleFamily(msg.into()))
    }
}

/// Two disjoint K_m cliques joined through `b` bridge nodes. Bridge node `t`
/// connects to node `t mod m` of each clique; there are no direct
/// clique-to-clique edges, so the bridges form the bottleneck separator with
/// N1 = N3 = m and N2 = b.
pub fn generate_barbell(clique_size: usize, bridge_nodes: usize, weight: f64) -> Result<Graph> {
    let (m, b) = (clique_size, bridge_nodes);
    require(m >= 2, "barbell cliques need m >= 2")?;
    require(b >= 1, "barbell needs b >= 1")?;
    let n = 2 * m + b;
    let mut edges = Vec::new();
    for base in [0, m] {
        for i in 0..m {
            for j in (i + 1)..m {
                edges.push((base + i, base + j, weight));
            }
        }
    }
    for t in 0..b {
        let bridge = 2 * m + t;
        edges.push((t % m, bridge, weight));
        edges.push((m + t % m, bridge, weight));
    }
    Graph::from_edges(n, &edges)
}

/// Simple connected k-regular graph on `n` nodes, sampled by the pairing
/// (configuration) model with unit weights: k stubs per node, a seeded
/// uniform random perfect matching of stubs, and whole-sample rejection on
/// self-loops, multi-edges, or disconnection.
pub fn generate_random_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    random_regular_detailed(n, k, 1.0, seed, DEFAULT_RETRY_CAP)
}

/// As [`generate_random_regular`] with an explicit uniform weight and
/// rejection-round cap.
pub fn random_regular_detailed(
    n: usize,
    k: usize,
    weight: f64,
    seed: u64,
    retry_cap: usize,
) -> Result<Graph> {
    if k < 1 || k >= n {
        return Err(Error::InfeasibleFamily(format!(
            "random regular needs 1 <= k < N, got k={k}, N={n}"
        )));
    }
    if (n * k) % 2 != 0 {
        return Err(Error::InfeasibleFamily(format!(
            "N*k must be even, got N={n}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = Vec::with_capacity(n * k);

    for _ in 0..retry_cap {
        stubs.clear();
        for v in 0..n {
            stubs.extend(std::iter::repeat(v).take(k));
        }
        stubs.shuffle(&mut rng);

        let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(n * k / 2);
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * k / 2);
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                simple = false;
                break;
            }
            edges.push((a, b, weight));
        }
        if !simple {
            continue;
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryExhausted { attempts: retry_cap })
}
