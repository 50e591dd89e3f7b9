//! WebAssembly bindings for the browser demo. Each export returns a flat
//! row-major `Float64Array`; the row layout is given per function.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use riccati_core::baselines::{integrate_explicit, ExplicitScheme};
use riccati_core::cases::{oscillator_case, square_root_case, CaseSpec, OscillatorParams};
use riccati_core::scalar::{exact_solution, iterate, ScalarProblem};
use riccati_core::scheme::{integrate, RiccatiProblem, SchemeParams};
use riccati_core::{Matrix, SymMatrix};
use wasm_bindgen::prelude::*;

/// Largest number of steps a single request may take.
pub const MAX_STEPS: usize = 200_000;

fn step_count(dt: f64, t_end: f64) -> Result<usize, String> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(format!(
            "need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}"
        ));
    }
    let steps = (t_end / dt + 1e-9).floor();
    if steps > MAX_STEPS as f64 {
        return Err(format!("{steps} steps requested; the limit is {MAX_STEPS}"));
    }
    Ok(steps as usize)
}

fn eigen_rows(case: &CaseSpec, mu: f64, dt: f64, t_end: f64) -> Result<Vec<f64>, String> {
    step_count(dt, t_end)?;
    let params = SchemeParams::new(dt, mu).map_err(|e| e.to_string())?;
    let tr = integrate(&case.problem, &params, t_end).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(tr.records.len() * 4);
    for r in &tr.records {
        out.push(r.t);
        out.extend_from_slice(&r.eigenvalues);
        out.push(r.are_residual);
    }
    Ok(out)
}

/// Rows `[t, λ₁, λ₂, ARE residual]` for the square-root case.
pub fn square_root_rows(mu: f64, dt: f64, t_end: f64) -> Result<Vec<f64>, String> {
    eigen_rows(&square_root_case(), mu, dt, t_end)
}

/// Rows `[t, λ₁, λ₂, ARE residual]` for the undamped oscillator.
pub fn oscillator_rows(alpha: f64, mu: f64, dt: f64, t_end: f64) -> Result<Vec<f64>, String> {
    let case = oscillator_case(OscillatorParams::new(alpha)).map_err(|e| e.to_string())?;
    eigen_rows(&case, mu, dt, t_end)
}

/// Rows `[t, exact, homographic, forward Euler]` for `x' = 2ax − kx² + q`,
/// `x(0) = d`. Euler entries after divergence are NaN.
pub fn scalar_rows(
    k: f64,
    a: f64,
    q: f64,
    d: f64,
    dt: f64,
    t_end: f64,
) -> Result<Vec<f64>, String> {
    let steps = step_count(dt, t_end)?;
    let p = ScalarProblem::new(k, a, q, d).map_err(|e| e.to_string())?;
    let homographic = iterate(&p, d, dt, steps);
    let prob = RiccatiProblem::with_initial(
        Matrix::from_diagonal(&[a]),
        SymMatrix::from_diagonal(&[k]),
        SymMatrix::from_diagonal(&[q]),
        SymMatrix::from_diagonal(&[d]),
    )
    .map_err(|e| e.to_string())?;
    let euler = integrate_explicit(ExplicitScheme::ForwardEuler, &prob, dt, t_end)
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity((steps + 1) * 4);
    for (j, x) in homographic.iter().enumerate() {
        let t = j as f64 * dt;
        out.push(t);
        out.push(exact_solution(&p, t).map_err(|e| e.to_string())?);
        out.push(*x);
        out.push(euler.records.get(j).map_or(f64::NAN, |r| r.eigenvalues[0]));
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn square_root_trajectory(mu: f64, dt: f64, t_end: f64) -> Result<Vec<f64>, JsError> {
    square_root_rows(mu, dt, t_end).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn oscillator_trajectory(
    alpha: f64,
    mu: f64,
    dt: f64,
    t_end: f64,
) -> Result<Vec<f64>, JsError> {
    oscillator_rows(alpha, mu, dt, t_end).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scalar_comparison(
    k: f64,
    a: f64,
    q: f64,
    d: f64,
    dt: f64,
    t_end: f64,
) -> Result<Vec<f64>, JsError> {
    scalar_rows(k, a, q, d, dt, t_end).map_err(|e| JsError::new(&e))
}
