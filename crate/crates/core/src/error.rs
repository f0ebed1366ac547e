use thiserror::Error;

/// Errors raised across the graph, spectral, and dynamics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node id {id} out of range for graph with {node_count} nodes")]
    InvalidNode { id: usize, node_count: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("remainder set X3 is empty: the seed's closed neighborhood covers the graph")]
    EmptyX3,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("infeasible family parameters: {0}")]
    InfeasibleFamily(String),

    #[error("random graph generation gave up after {attempts} rejection rounds")]
    RetryExhausted { attempts: usize },

    #[error("eigensolver failed to converge (residual {residual:e})")]
    EigenConvergence { residual: f64 },

    #[error("Cheeger brute force refused: N={n} exceeds cap {cap}; use the sweep cut instead")]
    CheegerCapExceeded { n: usize, cap: usize },

    #[error("system is unstable on the relevant subspace (max real part {max_real_part})")]
    UnstableSystem { max_real_part: f64 },

    #[error("step size too large: dt*max|eig| = {product:.3} exceeds the RK4 stability limit")]
    StepTooLarge { product: f64 },

    #[error("trajectory did not settle within the simulated horizon")]
    NotSettled,

    #[error("operation requires system order {expected}, got {actual}")]
    WrongOrder { expected: String, actual: usize },

    #[error("invalid gains: {0}")]
    InvalidGains(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical procedure (as opposed to input
    /// validation); the CLI maps these to exit code 2.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenConvergence { .. }
                | Error::RetryExhausted { .. }
                | Error::UnstableSystem { .. }
                | Error::StepTooLarge { .. }
                | Error::NotSettled
        )
    }
}
