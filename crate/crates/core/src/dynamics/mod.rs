//! nth-order consensus closed loops: assembly, stability, simulation, and
//! sensitivity.
//!
//! Each agent is a chain of n integrators driven by weighted relative
//! differences across all derivative orders. The closed loop is the block
//! companion matrix with `-a_k L` in the bottom block row; grounding a
//! leader replaces `L` by the grounded Laplacian and drops the leader's
//! states.

mod hinf;
mod simulate;
mod stability;

pub use hinf::{
    hinf_first_order, hinf_first_order_grounded, hinf_numeric, hinf_numeric_with, HinfOptions,
};
pub use simulate::{
    convergence_envelope_check, settling_time, simulate, EnvelopeCheck, Event, EventRecord,
    EventRecordKind, Trajectory,
};
pub use stability::{
    closed_loop_eigenvalues, mode_polynomial_roots, necessary_condition_high_order,
    stability_report, StabilityReport,
};


use crate::error::{Error, Result};
use crate::graph::{build_laplacian, grounded_laplacian, Graph};
use crate::linalg::{DenseMatrix, SymMatrix};

/// Fixed nonnegative consensus gains `a_0..a_{n-1}` with their uniform cap.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusGains {
    a: Vec<f64>,
    a_max: f64,
}

impl ConsensusGains {
    pub fn new(a: Vec<f64>, a_max: f64) -> Result<ConsensusGains> {
        if a.is_empty() {
            return Err(Error::InvalidGains("need at least one gain".into()));
        }
        if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidGains(
                "gains must be finite and nonnegative".into(),
            ));
        }
        let last = *a.last().unwrap();
        if last <= 0.0 {
            return Err(Error::InvalidGains(format!(
                "highest-order gain must be positive, got {last}"
            )));
        }
        if a.iter().any(|v| *v > a_max) {
            return Err(Error::InvalidGains(format!(
                "gains exceed the cap a_max = {a_max}"
            )));
        }
        Ok(ConsensusGains { a, a_max })
    }

    /// Gains with the cap set to the largest coefficient.
    pub fn from_coefficients(a: Vec<f64>) -> Result<ConsensusGains> {
        let cap = a.iter().cloned().fold(0.0, f64::max);
        ConsensusGains::new(a, cap)
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `a_0..a_{n-1}`.
    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }
}

/// Desired formation trajectory `x*_i(t) = v* t + delta_i`: a common cruise
/// velocity plus per-node setpoint offsets. Simulations run in deviation
/// coordinates; this maps them back to absolute positions.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationConfig {
    pub v_star: f64,
    pub delta: Vec<f64>,
}

impl FormationConfig {
    pub fn new(v_star: f64, delta: Vec<f64>, node_count: usize) -> Result<FormationConfig> {
        if delta.len() != node_count {
            return Err(Error::InvalidInput(format!(
                "delta has {} entries for {node_count} nodes",
                delta.len()
            )));
        }
        Ok(FormationConfig { v_star, delta })
    }

    /// Setpoint positions `x*_i(t)`.
    pub fn reference_at(&self, t: f64) -> Vec<f64> {
        self.delta.iter().map(|d| self.v_star * t + d).collect()
    }

    /// Absolute position of node `i` given its deviation at time `t`.
    pub fn absolute(&self, i: usize, t: f64, deviation: f64) -> f64 {
        self.v_star * t + self.delta[i] + deviation
    }
}

/// A consensus closed loop: graph, gains, and an optional grounded leader.
#[derive(Debug, Clone)]
pub struct ConsensusSystem {
    graph: Graph,
    gains: ConsensusGains,
    leader: Option<usize>,
}

impl ConsensusSystem {
    pub fn new(graph: Graph, gains: ConsensusGains, leader: Option<usize>) -> Result<ConsensusSystem> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(l) = leader {
            if !graph.has_node(l) {
                return Err(Error::InvalidNode {
                    id: l,
                    node_count: graph.node_count(),
                });
            }
        }
        Ok(ConsensusSystem {
            graph,
            gains,
            leader,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn gains(&self) -> &ConsensusGains {
        &self.gains
    }

    pub fn leader(&self) -> Option<usize> {
        self.leader
    }

    pub fn order(&self) -> usize {
        self.gains.order()
    }

    /// Number of dynamic agents: N, or N - 1 when grounded.
    pub fn agent_count(&self) -> usize {
        match self.leader {
            Some(_) => self.graph.node_count() - 1,
            None => self.graph.node_count(),
        }
    }

    pub fn state_dim(&self) -> usize {
        self.order() * self.agent_count()
    }

    /// The Laplacian entering the bottom block row: `L`, or the grounded
    /// Laplacian when a leader is set.
    pub fn laplacian(&self) -> SymMatrix {
        match self.leader {
            Some(l) => grounded_laplacian(&self.graph, l).expect("leader validated"),
            None => build_laplacian(&self.graph),
        }
    }
}

/// Assemble the dense block-companion closed-loop matrix: identity blocks on
/// the superdiagonal and `-a_k L` (or `-a_k Lbar`) across the bottom block
/// row. For n = 1 this degenerates to `-a_0 L`.
pub fn build_closed_loop(sys: &ConsensusSystem) -> DenseMatrix {
    let lap = sys.laplacian();
    let m = lap.dim();
    let n = sys.order();
    let a = sys.gains().coefficients();
    let dim = n * m;
    let mut out = DenseMatrix::zeros(dim, dim);
    for block in 0..n.saturating_sub(1) {
        for i in 0..m {
            out.set(block * m + i, (block + 1) * m + i, 1.0);
        }
    }
    let base = (n - 1) * m;
    for (k, ak) in a.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                let v = out.get(base + i, k * m + j) - ak * lap.get(i, j);
                out.set(base + i, k * m + j, v);
            }
        }
    }
    out
}
