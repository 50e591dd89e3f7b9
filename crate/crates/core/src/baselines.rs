//! Explicit reference integrators for the Riccati equation.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scheme::{RiccatiProblem, StepRecord, Termination, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplicitScheme {
    ForwardEuler,
    /// Explicit midpoint rule.
    Rk2Midpoint,
}

impl ExplicitScheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::ForwardEuler => "euler",
            Self::Rk2Midpoint => "rk2",
        }
    }
}

/// `F(X) = XA + AᵗX − XKX + Q`, symmetrized.
pub fn riccati_rhs(prob: &RiccatiProblem, x: &SymMatrix) -> Result<SymMatrix> {
    let xm = x.to_matrix();
    let a = prob.a();
    let xa = &xm * a;
    let xkx = &(&xm * &prob.k().to_matrix()) * &xm;
    let f = &(&(&xa + &a.transpose().multiply(&xm)?) - &xkx) + &prob.q().to_matrix();
    f.symmetrize()
}

fn divergence_limit(prob: &RiccatiProblem) -> f64 {
    1e12 * (1.0 + prob.q().frobenius_norm())
}

fn check(prob: &RiccatiProblem, x: SymMatrix, step: usize) -> Result<SymMatrix> {
    let norm = x.frobenius_norm();
    if !x.is_finite() || !norm.is_finite() || norm > divergence_limit(prob) {
        return Err(Error::Diverged { step, norm });
    }
    Ok(x)
}

fn raw_step(
    scheme: ExplicitScheme,
    prob: &RiccatiProblem,
    x: &SymMatrix,
    dt: f64,
) -> Result<SymMatrix> {
    let f = riccati_rhs(prob, x)?;
    match scheme {
        ExplicitScheme::ForwardEuler => x.lin_comb(1.0, &f, dt),
        ExplicitScheme::Rk2Midpoint => {
            let mid = x.lin_comb(1.0, &f, 0.5 * dt)?;
            x.lin_comb(1.0, &riccati_rhs(prob, &mid)?, dt)
        }
    }
}

/// One explicit step; [`Error::Diverged`] (with `step = 1`) if the new
/// iterate is non-finite or larger than `1e12·(1 + ‖Q‖_F)`.
pub fn explicit_step(
    scheme: ExplicitScheme,
    prob: &RiccatiProblem,
    x: &SymMatrix,
    dt: f64,
) -> Result<SymMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "dt must be positive, got {dt}"
        )));
    }
    check(prob, raw_step(scheme, prob, x, dt)?, 1)
}

/// Runs `floor(t_end/dt)` explicit steps from `X₀`. Divergence ends the
/// trajectory early with [`Termination::Diverged`] instead of failing.
pub fn integrate_explicit(
    scheme: ExplicitScheme,
    prob: &RiccatiProblem,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "t_end must be nonnegative, got {t_end}"
        )));
    }
    let steps = (t_end / dt + 1e-9).floor() as usize;
    let mut x = prob.x0().clone();
    let mut records = vec![StepRecord::new(prob, 0, dt, x.clone())?];
    let mut termination = Termination::ReachedEnd;
    for j in 1..=steps {
        match raw_step(scheme, prob, &x, dt).and_then(|next| check(prob, next, j)) {
            Ok(next) => {
                x = next;
                records.push(StepRecord::new(prob, j, dt, x.clone())?);
            }
            Err(Error::Diverged { step, .. }) => {
                termination = Termination::Diverged { step };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trajectory {
        dt,
        records,
        termination,
    })
}

/// First step at which an explicit run diverges or produces an iterate with
/// `min_eig < −tol·(1 + ‖X‖_F)`, scanning at most `max_steps` steps.
pub fn first_failure(
    scheme: ExplicitScheme,
    prob: &RiccatiProblem,
    dt: f64,
    max_steps: usize,
    tol: f64,
) -> Result<Option<usize>> {
    let mut x = prob.x0().clone();
    for j in 1..=max_steps {
        match raw_step(scheme, prob, &x, dt).and_then(|next| check(prob, next, j)) {
            Ok(next) => x = next,
            Err(Error::Diverged { step, .. }) => return Ok(Some(step)),
            Err(e) => return Err(e),
        }
        if x.min_eigenvalue()? < -tol * (1.0 + x.frobenius_norm()) {
            return Ok(Some(j));
        }
    }
    Ok(None)
}
