use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Hilbert-space dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("effective coupling is undefined for t = 0; request the strong-coupling displacement explicitly")]
    LambdaUndefined,

    #[error("coherent state with alpha = {alpha} keeps only {norm2:.6} of its norm at n_max = {n_max}")]
    TruncationLoss { alpha: f64, n_max: usize, norm2: f64 },

    #[error("no sign change of the displacement equation on [0, g/omega0]")]
    NoBracket,

    #[error("phase-factor solver failed: best residual {residual:e} after {iterations} iterations")]
    PhaseSolver { iterations: usize, residual: f64 },

    #[error("site {site} is out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("qubit {qubit} is out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("non-finite amplitude encountered after gate {gate}")]
    NonFinite { gate: usize },

    #[error("layout mismatch: {0}")]
    Layout(String),

    #[error("circuit needs {required} qubits, above the dense-simulation cap of {cap}")]
    SimulationCap { required: usize, cap: usize },

    #[error("success probability is zero")]
    DegeneratePolynomial,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("overlap vanished at lambda = {lambda}")]
    ZeroOverlap { lambda: f64 },

    #[error("at lambda = {lambda}: {source}")]
    AtLambda {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },
}
