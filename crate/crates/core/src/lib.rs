//! Positivity-preserving implicit integration of Riccati differential
//! equations.
//!
//! The matrix scheme lives in [`scheme`], its scalar counterpart with closed
//! forms and error constants in [`scalar`].
//!
//! ```
//! use riccati_core::cases::square_root_case;
//! use riccati_core::scheme::{solve_steady, SchemeParams};
//!
//! let case = square_root_case();
//! let params = SchemeParams::new(0.01, 0.1)?;
//! let steady = solve_steady(&case.problem, &params)?.require_converged()?;
//! let l = steady.x.eigen()?.eigenvalues;
//! assert!((l[0] - 1.0).abs() < 1e-9 && (l[1] - 10.0).abs() < 1e-9);
//! # Ok::<(), riccati_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cases;
pub mod csv;
pub mod error;
pub mod linalg;
pub mod lqr;
pub mod lyapunov;
pub mod scalar;
pub mod scheme;

pub use error::{Error, Result};
pub use linalg::{Matrix, Spectrum, SymMatrix};
pub use scheme::{RiccatiProblem, SchemeParams, SteadyState, StepRecord, Termination, Trajectory};
