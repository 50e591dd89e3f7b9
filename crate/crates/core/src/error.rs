use thiserror::Error;

/// Failures reported by the numerical kernels and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error(
        "singular linear system: pivot {pivot:e} in column {column} (matrix inf-norm {norm:e})"
    )]
    Singular {
        pivot: f64,
        column: usize,
        norm: f64,
    },

    #[error("singular Lyapunov operator{}: pivot {pivot:e} in column {column}", step_suffix(*.step))]
    LyapunovSingular {
        pivot: f64,
        column: usize,
        step: Option<usize>,
    },

    #[error("steady state not reached after {steps} steps (last relative change {last_change:e})")]
    MaxStepsExceeded { steps: usize, last_change: f64 },

    #[error("reference data: {0}")]
    Reference(String),

    #[error("explicit iterate diverged at step {step} (Frobenius norm {norm:e})")]
    Diverged { step: usize, norm: f64 },
}

fn step_suffix(step: Option<usize>) -> String {
    match step {
        Some(j) => format!(" at step {j}"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
