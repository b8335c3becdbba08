use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("no solution found after {restarts} restarts (best residual {best_residual:.3e}, c-signs {sign_history:?})")]
    NoSolution {
        restarts: usize,
        best_residual: f64,
        /// Sign of the ray coefficient `c` observed at each top-level restart.
        sign_history: Vec<i8>,
    },

    #[error("avoid-set clearance not achieved: {0}")]
    Clearance(String),

    /// A two-segment connection is not available; the caller should try the five-knot chain.
    #[error("escalation required: {0}")]
    Escalate(String),

    #[error("no path found at stage `{stage}`: {detail}")]
    NoPath { stage: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Input(format!(
            "{what}: dimension {got} does not match expected {want}"
        )));
    }
    Ok(())
}
