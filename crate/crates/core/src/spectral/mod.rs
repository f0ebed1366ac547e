//! Eigenvalue analysis of graph families: algebraic connectivity, grounded
//! eigenvalue, the grounded upper bound `q * w_max / (N - 1)`, Cheeger
//! constants, and expander-trend classification.

mod cheeger;
mod trend;

pub use cheeger::{cheeger_exact, cheeger_sweep, CheegerResult, DEFAULT_CHEEGER_CAP};
pub use trend::{classify_expander_trend, ExpanderTrendLabel, ExpanderTrendReport, TrendPoint};

use crate::error::{Error, Result};
use crate::graph::{build_laplacian, grounded_laplacian, normalized_laplacian, DegreeBounds, Graph};
use crate::linalg::{eigenvalues, symmetric_eigen};

/// Threshold under which a computed lambda_2 triggers a connectivity
/// recheck by traversal, to distinguish numerical zero from a true
/// disconnection.
pub const DISCONNECT_THRESHOLD: f64 = 1e-8;

/// Algebraic connectivity: the second-smallest Laplacian eigenvalue.
/// Errors with [`Error::Disconnected`] when the graph is disconnected.
pub fn algebraic_connectivity(g: &Graph) -> Result<f64> {
    if g.node_count() < 2 {
        return Err(Error::InvalidGraph(
            "algebraic connectivity needs N >= 2".into(),
        ));
    }
    let vals = eigenvalues(&build_laplacian(g))?;
    let lambda2 = vals[1];
    if lambda2 < DISCONNECT_THRESHOLD && !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(lambda2)
}

/// Smallest eigenvalue of the grounded Laplacian for the given leader.
pub fn grounded_eigenvalue(g: &Graph, leader: usize) -> Result<f64> {
    if g.node_count() < 2 {
        return Err(Error::InvalidGraph("grounding needs N >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let vals = eigenvalues(&grounded_laplacian(g, leader)?)?;
    Ok(vals[0])
}

/// Second-smallest eigenvalue of the degree-normalized Laplacian.
pub fn normalized_connectivity(g: &Graph) -> Result<f64> {
    if g.node_count() < 2 {
        return Err(Error::InvalidGraph("needs N >= 2".into()));
    }
    let vals = eigenvalues(&normalized_laplacian(g)?)?;
    Ok(vals[1])
}

/// The grounded-eigenvalue upper bounds for a bounded-degree graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundedBound {
    /// Closed form `q * w_max / (N - 1)`.
    pub loose: f64,
    /// Sharper intermediate bound `(sum of edge weights at the leader) / (N - 1)`,
    /// available when a leader is named.
    pub tighter: Option<f64>,
}

/// Upper bounds on the grounded eigenvalue. The loose bound depends only on
/// the family constants; the tighter one uses the actual leader degree.
pub fn grounded_eigenvalue_bound(g: &Graph, bounds: &DegreeBounds, leader: Option<usize>) -> Result<GroundedBound> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidGraph("bound needs N >= 2".into()));
    }
    let loose = bounds.q as f64 * bounds.w_max / (n as f64 - 1.0);
    let tighter = match leader {
        Some(l) => {
            if !g.has_node(l) {
                return Err(Error::InvalidNode {
                    id: l,
                    node_count: n,
                });
            }
            Some(g.weighted_degree(l) / (n as f64 - 1.0))
        }
        None => None,
    };
    Ok(GroundedBound { loose, tighter })
}

/// Flat spectral summary of one graph instance.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub node_count: usize,
    pub family: Option<String>,
    pub seed: Option<u64>,
    /// Laplacian spectrum, ascending.
    pub lambda_all: Vec<f64>,
    pub lambda2: f64,
    pub grounded_lambda1: Option<f64>,
    pub normalized_lambda2: f64,
    /// Exact Cheeger constant, present when N is within the brute-force cap.
    pub cheeger: Option<f64>,
    /// `q * w_max / (N - 1)` for the bounds used.
    pub lemma2_bound: f64,
    /// Worst eigenpair residual of the underlying decomposition.
    pub residual: f64,
}

impl SpectralReport {
    pub fn csv_header() -> &'static str {
        "N,family,seed,lambda2,grounded_lambda1,lemma2_bound,normalized_lambda2,cheeger,residual"
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.node_count,
            self.family.as_deref().unwrap_or(""),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.lambda2,
            opt(&self.grounded_lambda1),
            self.lemma2_bound,
            self.normalized_lambda2,
            opt(&self.cheeger),
            self.residual
        )
    }
}

/// Full spectral report for one graph. `bounds` defaults to the graph's own
/// observed degree/weight extremes; the exact Cheeger constant is included
/// for graphs within `cheeger_cap`.
pub fn spectral_report(
    g: &Graph,
    leader: Option<usize>,
    bounds: Option<DegreeBounds>,
    cheeger_cap: usize,
) -> Result<SpectralReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let bounds = match bounds {
        Some(b) => b,
        None => DegreeBounds::observed(g)?,
    };
    let eig = symmetric_eigen(&build_laplacian(g))?;
    let lambda2 = eig.values[1];
    if lambda2 < DISCONNECT_THRESHOLD && !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let grounded_lambda1 = match leader {
        Some(l) => Some(grounded_eigenvalue(g, l)?),
        None => None,
    };
    let normalized_lambda2 = normalized_connectivity(g)?;
    let cheeger = if g.node_count() <= cheeger_cap {
        Some(cheeger_exact(g, cheeger_cap)?.value)
    } else {
        None
    };
    let bound = grounded_eigenvalue_bound(g, &bounds, leader)?;
    Ok(SpectralReport {
        node_count: g.node_count(),
        family: None,
        seed: None,
        lambda_all: eig.values,
        lambda2,
        grounded_lambda1,
        normalized_lambda2,
        cheeger,
        lemma2_bound: bound.loose,
        residual: eig.residual,
    })
}
