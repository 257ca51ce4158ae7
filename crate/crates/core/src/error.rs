use thiserror::Error;

/// Errors produced by grid construction, operator assembly and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid must have at least 3 cells so that an interior exists.
    #[error("invalid grid: need at least 3 cells, got {0}")]
    InvalidGrid(usize),

    /// Initial-condition parameters outside their admissible range.
    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),

    /// Vector length does not match the grid it is paired with.
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Half-node or node index outside the grid.
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    /// Run or operator parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Elimination hit a vanishing pivot.
    #[error("singular system: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },

    /// Dense solves are a test oracle; cap the size so they stay cheap.
    #[error("dense solve limited to n <= 200, got {0}")]
    DenseTooLarge(usize),

    /// Adaptive quadrature failed to settle within its refinement cap.
    #[error("quadrature did not converge: last correction {last_delta:e} after {refinements} refinements")]
    QuadratureDidNotConverge { refinements: usize, last_delta: f64 },

    /// Markov-chain ensemble parameters outside their admissible range.
    #[error("invalid chain config: {0}")]
    InvalidChainConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
