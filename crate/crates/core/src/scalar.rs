//! Scalar Riccati equation `dx/dt + k x² − 2 a x − q = 0`, `x(0) = d`.
//!
//! The homographic scheme factorizes the square as `x_j x_{j+1}` and keeps
//! the positive part of `a` explicit and the negative part implicit, so each
//! step is a linear-fractional map with nonnegative coefficients:
//!
//! ```text
//! x_{j+1} = ((1 + 2a⁺Δt) x_j + qΔt) / (kΔt x_j + 1 + 2a⁻Δt)
//! ```
//!
//! Besides the scheme, this module carries the closed-form solution of the
//! continuous problem and the constants of the scheme's error bound, which
//! the tests and the CLI use as oracles.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Data `(k, a, q, d)` of the scalar problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProblem {
    pub k: f64,
    pub a: f64,
    pub q: f64,
    pub d: f64,
}

impl ScalarProblem {
    pub fn new(k: f64, a: f64, q: f64, d: f64) -> Result<Self> {
        if ![k, a, q, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("scalar data must be finite".into()));
        }
        if !(k > 0.0) {
            return Err(Error::InvalidInput(format!("k must be positive, got {k}")));
        }
        if q < 0.0 {
            return Err(Error::InvalidInput(format!(
                "q must be nonnegative, got {q}"
            )));
        }
        if a * a + q * q == 0.0 {
            return Err(Error::InvalidInput("a and q cannot both vanish".into()));
        }
        if d < 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial condition must be nonnegative, got {d}"
            )));
        }
        Ok(Self { k, a, q, d })
    }

    pub fn with_initial(self, d: f64) -> Result<Self> {
        Self::new(self.k, self.a, self.q, d)
    }

    /// `√(a² + kq)`.
    pub fn discriminant_root(&self) -> f64 {
        (self.a * self.a + self.k * self.q).sqrt()
    }

    pub fn diagnostics(&self) -> ScalarDiagnostics {
        diagnostics(self)
    }
}

/// Derived quantities of a [`ScalarProblem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDiagnostics {
    /// Positive root of `k x² − 2 a x − q = 0`.
    pub x_star: f64,
    /// The other root.
    pub x_minus: f64,
    /// Relaxation time `1 / (2√(a² + kq))`.
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn diagnostics(p: &ScalarProblem) -> ScalarDiagnostics {
    let root = p.discriminant_root();
    let x_star = (p.a + root) / p.k;
    let x_minus = x_star - 2.0 * root / p.k;
    let tau = 1.0 / (2.0 * root);
    ScalarDiagnostics {
        x_star,
        x_minus,
        tau,
        alpha: root - p.a.abs(),
        beta: root + p.a.abs(),
    }
}

/// Splitting `a = plus − minus` into an explicit and an implicit part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub plus: f64,
    pub minus: f64,
}

impl Split {
    /// `a⁺ = max(a, 0)`, `a⁻ = max(−a, 0)`.
    pub fn complementary(a: f64) -> Self {
        Self {
            plus: a.max(0.0),
            minus: (-a).max(0.0),
        }
    }

    /// Any nonnegative pair; the caller is responsible for `plus − minus = a`.
    pub fn new(plus: f64, minus: f64) -> Result<Self> {
        if !(plus >= 0.0 && minus >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "split parts must be nonnegative, got ({plus}, {minus})"
            )));
        }
        Ok(Self { plus, minus })
    }

    /// The split under which the matrix scheme with shift `mu` reduces to the
    /// scalar scheme at `n = 1`: `(μ/2, μ/2 − a)`.
    pub fn from_shift(a: f64, mu: f64) -> Result<Self> {
        Self::new(0.5 * mu, 0.5 * mu - a)
    }
}

/// One homographic step with the complementary split.
pub fn homographic_step(p: &ScalarProblem, x: f64, dt: f64) -> f64 {
    homographic_step_split(p, x, dt, Split::complementary(p.a))
}

pub fn homographic_step_split(p: &ScalarProblem, x: f64, dt: f64, split: Split) -> f64 {
    ((1.0 + 2.0 * split.plus * dt) * x + p.q * dt) / (p.k * dt * x + 1.0 + 2.0 * split.minus * dt)
}

/// `x_0 = x0, …, x_steps` with the complementary split.
pub fn iterate(p: &ScalarProblem, x0: f64, dt: f64, steps: usize) -> Vec<f64> {
    let mut xs = Vec::with_capacity(steps + 1);
    let mut x = x0;
    xs.push(x);
    for _ in 0..steps {
        x = homographic_step(p, x, dt);
        xs.push(x);
    }
    xs
}

/// False when `1 + 2|a|Δt − kqΔt²` vanishes, i.e. the homographic map
/// degenerates to a constant and the scheme is unusable.
pub fn degenerate_dt_check(p: &ScalarProblem, dt: f64) -> bool {
    let lin = 2.0 * p.a.abs() * dt;
    let quad = p.k * p.q * dt * dt;
    (1.0 + lin - quad).abs() > 1e-12 * (1.0 + lin + quad)
}

/// Closed-form solution of the continuous problem from the problem's `d`.
pub fn exact_solution(p: &ScalarProblem, t: f64) -> Result<f64> {
    exact_solution_from(p, p.d, t)
}

/// Closed-form solution from an arbitrary initial value `d`.
pub fn exact_solution_from(p: &ScalarProblem, d: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    let diag = diagnostics(p);
    let dev = d - diag.x_star;
    let decay = (-t / diag.tau).exp();
    let one_minus = -(-t / diag.tau).exp_m1();
    let denom = 1.0 + p.k * diag.tau * dev * one_minus;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "initial value {d} leaves the region where the closed form stays finite (denominator {denom:e} at t = {t})"
        )));
    }
    Ok(diag.x_star + dev * decay / denom)
}

/// Ratio of the geometric sequence `u_j = (x* − x_j)/(x_j − x₋)`.
///
/// Evaluated as `(γ x₋ + δ)/(γ x* + δ)`, which equals
/// `((1+2a⁻Δt) x* − qΔt)/((1+2a⁺Δt) x* + qΔt)` and stays defined at `q = 0`.
pub fn geometric_ratio(p: &ScalarProblem, dt: f64) -> f64 {
    let diag = diagnostics(p);
    let split = Split::complementary(p.a);
    let gamma = p.k * dt;
    let delta = 1.0 + 2.0 * split.minus * dt;
    (gamma * diag.x_minus + delta) / (gamma * diag.x_star + delta)
}

/// `φ(Δt) = 1 + (τ/Δt) log((1 − αΔt)/(1 + βΔt))`, the exponent defect
/// between the discrete and continuous decay of `u_j`.
pub fn phi(p: &ScalarProblem, dt: f64) -> Result<f64> {
    let diag = diagnostics(p);
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if !(1.0 - diag.alpha * dt > 0.0) {
        return Err(Error::Domain(format!(
            "1 - alpha*dt must be positive (alpha = {}, dt = {dt})",
            diag.alpha
        )));
    }
    let log_ratio = (-diag.alpha * dt).ln_1p() - (diag.beta * dt).ln_1p();
    Ok(1.0 + diag.tau / dt * log_ratio)
}

/// Constants `(C, η)` of the admissible initial-data window
/// `−1/(kτ) + η ≤ d − x* ≤ C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Params {
    pub c: f64,
    pub eta: f64,
}

impl Theorem1Params {
    pub fn new(p: &ScalarProblem, c: f64, eta: f64) -> Result<Self> {
        let tau = diagnostics(p).tau;
        if !(c > 0.0) {
            return Err(Error::InvalidInput(format!("C must be positive, got {c}")));
        }
        if !(eta > 0.0 && eta < 1.0 / (p.k * tau)) {
            return Err(Error::InvalidInput(format!(
                "eta must lie in (0, 1/(k tau)) = (0, {}), got {eta}",
                1.0 / (p.k * tau)
            )));
        }
        Ok(Self { c, eta })
    }

    /// Whether `d` lies in the admissible window around `x*`.
    pub fn admits(&self, p: &ScalarProblem, d: f64) -> bool {
        let diag = diagnostics(p);
        let dev = d - diag.x_star;
        dev >= -1.0 / (p.k * diag.tau) + self.eta && dev <= self.c
    }
}

/// Error-bound constants of the scalar scheme.
///
/// The bound is assembled from two separately derived terms: `initial_data`
/// multiplies `|d − d_Δ|` and `step` multiplies `Δt` (or `Δt²` when `a = 0`).
/// [`Theorem1Constants::a_as_printed`] combines them with an infimum and
/// [`Theorem1Constants::a`] with a supremum. Neither bounds the error for
/// every admissible `d`: both use `min(C, 1/(kτ) − η)` where `|d − x*|` can
/// reach `max(C, 1/(kτ) − η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Constants {
    pub initial_data: f64,
    pub step: f64,
    /// Largest admissible time step.
    pub b: f64,
    /// Whether the bound is second order (`a = 0`).
    pub second_order: bool,
}

impl Theorem1Constants {
    pub fn a(&self) -> f64 {
        self.initial_data.max(self.step)
    }

    pub fn a_as_printed(&self) -> f64 {
        self.initial_data.min(self.step)
    }

    /// `A·(Δt^order + |d − d_Δ|)` with `A = self.a()`.
    pub fn bound(&self, dt: f64, d: f64, d_delta: f64) -> f64 {
        self.bound_with(self.a(), dt, d, d_delta)
    }

    pub fn bound_with(&self, a: f64, dt: f64, d: f64, d_delta: f64) -> f64 {
        let h = if self.second_order { dt * dt } else { dt };
        a * (h + (d - d_delta).abs())
    }
}

pub fn theorem1_constants(p: &ScalarProblem, params: Theorem1Params) -> Theorem1Constants {
    let diag = diagnostics(p);
    let (k, tau, eta) = (p.k, diag.tau, params.eta);
    let m = params.c.min(1.0 / (k * tau) - eta);
    let initial_data = (1.0 / (k * tau * eta)).powi(2);
    if p.a == 0.0 {
        Theorem1Constants {
            initial_data,
            step: 11.0 / (96.0 * E) * k / (tau * eta) * m.powi(3),
            b: tau / 2.0,
            second_order: true,
        }
    } else {
        let abs_a = p.a.abs();
        Theorem1Constants {
            initial_data,
            step: 19.0 / (12.0 * E) * k / eta * m.powi(3),
            b: (tau / 2.0).min(abs_a * tau * tau).min(6.0 / (19.0 * abs_a)),
            second_order: false,
        }
    }
}

/// `max_j |x(jΔt; d) − x_j(Δt; d_Δ)|` over `0 ≤ jΔt ≤ t_end`.
pub fn max_error(p: &ScalarProblem, d: f64, d_delta: f64, dt: f64, t_end: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let steps = (t_end / dt + 1e-9).floor() as usize;
    let mut x = d_delta;
    let mut worst: f64 = 0.0;
    for j in 0..=steps {
        let exact = exact_solution_from(p, d, j as f64 * dt)?;
        worst = worst.max((exact - x).abs());
        x = homographic_step(p, x, dt);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderStudy {
    /// `(Δt, max error)` per time step.
    pub errors: Vec<(f64, f64)>,
    /// Least-squares slope of `log(error)` against `log(Δt)`.
    pub slope: f64,
}

/// Observed convergence order of the scheme against the closed form.
pub fn order_study(
    p: &ScalarProblem,
    dt_list: &[f64],
    t_end: f64,
    d_delta: f64,
) -> Result<OrderStudy> {
    if dt_list.len() < 2 {
        return Err(Error::Domain(
            "an order study needs at least two time steps".into(),
        ));
    }
    let mut errors = Vec::with_capacity(dt_list.len());
    for &dt in dt_list {
        if !degenerate_dt_check(p, dt) {
            return Err(Error::Domain(format!(
                "time step {dt} makes the homographic map degenerate"
            )));
        }
        errors.push((dt, max_error(p, p.d, d_delta, dt, t_end)?));
    }
    if errors.iter().any(|&(_, e)| !(e > 0.0)) {
        return Err(Error::Domain(
            "zero error at some time step; the slope is undefined".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = errors.iter().map(|&(h, e)| (h.ln(), e.ln())).collect();
    Ok(OrderStudy {
        slope: least_squares_slope(&pts),
        errors,
    })
}

/// Least-squares slope of `y` against `x` over `(x, y)` pairs.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prob(k: f64, a: f64, q: f64) -> ScalarProblem {
        ScalarProblem::new(k, a, q, 0.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn diagnostics_examples() {
        let d = prob(1.0, 0.0, 4.0).diagnostics();
        assert_eq!((d.x_star, d.x_minus, d.tau), (2.0, -2.0, 0.25));
        let d = prob(1.0, 1.5, 4.0).diagnostics();
        assert_eq!((d.x_star, d.x_minus, d.tau), (4.0, -1.0, 0.2));
        let d = prob(1.0, 1.0, 0.0).diagnostics();
        assert_eq!((d.x_star, d.x_minus, d.tau), (2.0, 0.0, 0.5));
    }

    #[test]
    fn invalid_problems() {
        assert!(ScalarProblem::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(ScalarProblem::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ScalarProblem::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(ScalarProblem::new(1.0, 1.0, 1.0, -0.1).is_err());
        assert!(Split::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn step_examples() {
        let p = prob(1.0, 0.0, 4.0);
        let x1 = homographic_step(&p, 0.0, 0.5);
        assert_eq!(x1, 2.0);
        assert_eq!(homographic_step(&p, x1, 0.5), 2.0);
        assert_eq!(homographic_step(&prob(1.0, 0.0, 1.0), 0.0, 1.0), 1.0);
        for &dt in &[1e-3, 0.3, 7.0, 1e3] {
            for p in [prob(2.0, -1.3, 0.7), prob(0.5, 2.0, 3.0)] {
                let xs = p.diagnostics().x_star;
                assert!(rel(homographic_step(&p, xs, dt), xs) < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_examples() {
        assert!(!degenerate_dt_check(&prob(1.0, 0.0, 1.0), 1.0));
        assert!(degenerate_dt_check(&prob(1.0, 0.0, 1.0), 0.5));
        for &dt in &[1e-3, 1.0, 1e3] {
            assert!(degenerate_dt_check(&prob(1.0, 1.0, 0.0), dt));
            assert!(degenerate_dt_check(&prob(1.0, -1.0, 0.0), dt));
        }
    }

    #[test]
    fn degenerate_step_is_constant() {
        // 1 + 2|a|dt - kq dt^2 = 0 at dt = 1 + √2 for (k=1, a=1, q=1)
        let p = ScalarProblem::new(1.0, 1.0, 1.0, 0.3).unwrap();
        let dt = 1.0 + 2f64.sqrt();
        assert!(!degenerate_dt_check(&p, dt));
        let expected = (1.0 + 2.0 * dt) / dt;
        let xs = iterate(&p, 0.3, dt, 5);
        for &x in &xs[1..] {
            assert!(rel(x, expected) < 1e-12);
        }
    }

    #[test]
    fn exact_solution_examples() {
        let p = prob(1.0, 0.0, 1.0);
        assert!((exact_solution(&p, 1.0).unwrap() - 1f64.tanh()).abs() < 1e-15);
        assert!((exact_solution(&p, 1.0).unwrap() - 0.7615941560).abs() < 1e-10);
        let p = ScalarProblem::new(1.3, -0.4, 2.0, 0.9).unwrap();
        assert_eq!(exact_solution(&p, 0.0).unwrap(), 0.9);
        let xs = p.diagnostics().x_star;
        let at_star = p.with_initial(xs).unwrap();
        assert!(rel(exact_solution(&at_star, 3.7).unwrap(), xs) < 1e-15);
        assert!(exact_solution(&p, -1.0).is_err());
        // below x₋ the closed form blows up in finite time
        assert!(exact_solution_from(&p, -5.0, 10.0).is_err());
    }

    #[test]
    fn geometric_ratio_examples() {
        assert_eq!(geometric_ratio(&prob(1.0, 0.0, 4.0), 0.5), 0.0);
        assert!((geometric_ratio(&prob(1.0, 0.0, 1.0), 0.5) - 1.0 / 3.0).abs() < 1e-15);
        assert!((geometric_ratio(&prob(1.0, 1.0, 1.0), 1e-8) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn geometric_ratio_matches_printed_form() {
        for p in [
            prob(1.0, 1.0, 1.0),
            prob(2.0, -0.5, 3.0),
            prob(0.3, 0.0, 2.0),
        ] {
            let xs = p.diagnostics().x_star;
            let s = Split::complementary(p.a);
            for &dt in &[0.01, 0.4, 3.0] {
                let printed = ((1.0 + 2.0 * s.minus * dt) * xs - p.q * dt)
                    / ((1.0 + 2.0 * s.plus * dt) * xs + p.q * dt);
                assert!((geometric_ratio(&p, dt) - printed).abs() < 1e-14);
                assert!(geometric_ratio(&p, dt).abs() < 1.0);
            }
        }
    }

    #[test]
    fn u_sequence_is_geometric() {
        for p in [
            ScalarProblem::new(1.0, 1.0, 1.0, 0.0).unwrap(),
            ScalarProblem::new(2.0, -0.7, 0.5, 3.0).unwrap(),
            ScalarProblem::new(0.4, 0.0, 2.0, 0.1).unwrap(),
        ] {
            let diag = p.diagnostics();
            for &dt in &[0.05, 0.7, 4.0] {
                let r = geometric_ratio(&p, dt);
                let xs = iterate(&p, p.d, dt, 12);
                let u: Vec<f64> = xs
                    .iter()
                    .map(|x| (diag.x_star - x) / (x - diag.x_minus))
                    .collect();
                for j in 0..u.len() - 1 {
                    if u[j].abs() < 1e-4 {
                        break;
                    }
                    assert!(rel(u[j + 1], r * u[j]) < 1e-10, "dt {dt} j {j}");
                }
            }
        }
    }

    #[test]
    fn phi_small_step_is_consistent() {
        assert!(phi(&prob(1.0, 1.0, 1.0), 1e-9).unwrap().abs() <= 1e-7);
    }

    #[test]
    fn phi_rejects_log_domain() {
        let p = prob(1.0, 0.0, 1.0);
        let alpha = p.diagnostics().alpha;
        assert!(phi(&p, 1.0 / alpha).is_err());
        assert!(phi(&p, 0.0).is_err());
    }

    #[test]
    fn lemma_bounds_on_sampled_steps() {
        for p in [
            prob(1.0, 0.0, 1.0),
            prob(2.0, 0.0, 0.3),
            prob(1.0, 1.0, 1.0),
            prob(0.7, -2.0, 1.5),
        ] {
            let d = p.diagnostics();
            let (al, be, tau) = (d.alpha, d.beta, d.tau);
            for i in 1..=50 {
                let dt = tau / 2.0 * i as f64 / 50.0;
                let f = phi(&p, dt).unwrap();
                // pointwise Taylor bound, dt ≤ τ/2
                let taylor = tau
                    * ((be * be - al * al) / 2.0 * dt - (al.powi(3) + be.powi(3)) / 3.0 * dt * dt);
                assert!(
                    (f - taylor).abs()
                        <= 0.5 * (al.powi(4) + be.powi(4)) * tau * dt.powi(3) * (1.0 + 1e-9)
                            + 1e-15
                );
                if p.a == 0.0 {
                    assert!(f < 0.0);
                    assert!(
                        (f + dt * dt / (12.0 * tau * tau)).abs() <= dt * dt / (32.0 * tau * tau)
                    );
                } else if dt <= (tau / 2.0).min(p.a.abs() * tau * tau) {
                    assert!((f - p.a.abs() * dt).abs() <= 7.0 / 12.0 * p.a.abs() * dt);
                }
            }
        }
    }

    #[test]
    fn theorem1_constant_examples() {
        let p = prob(1.0, 0.0, 1.0);
        let c = theorem1_constants(&p, Theorem1Params::new(&p, 1.0, 0.5).unwrap());
        assert_eq!(c.b, 0.25);
        assert!(c.a() > 0.0 && c.a_as_printed() > 0.0);

        let p = prob(1.0, 1.0, 1.0);
        let tau = 1.0 / (2.0 * 2f64.sqrt());
        assert!((p.diagnostics().tau - tau).abs() < 1e-15);
        let c = theorem1_constants(&p, Theorem1Params::new(&p, 1.0, 0.5).unwrap());
        let b = (tau / 2.0).min(tau * tau).min(6.0 / 19.0);
        assert_eq!(c.b, b);
        assert!(c.a() > 0.0 && c.b > 0.0);
        assert!(Theorem1Params::new(&p, 1.0, 1.0 / (p.k * tau)).is_err());
        assert!(Theorem1Params::new(&p, 0.0, 0.5).is_err());
    }

    #[test]
    fn order_study_examples() {
        let dts = [0.2, 0.1, 0.05, 0.025];
        let s = order_study(&prob(1.0, 0.0, 1.0), &dts, 2.0, 0.0).unwrap();
        assert!((s.slope - 2.0).abs() <= 0.15, "slope {}", s.slope);
        let s = order_study(&prob(1.0, 1.0, 1.0), &dts, 2.0, 0.0).unwrap();
        assert!((s.slope - 1.0).abs() <= 0.15, "slope {}", s.slope);
        assert!(matches!(
            order_study(&prob(1.0, 1.0, 1.0), &[0.1], 2.0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn generalized_split_from_shift() {
        // n = 1 matrix scheme with k=1, a=0, q=1, μ=2, Δt=1 from x = 0
        let p = prob(1.0, 0.0, 1.0);
        let s = Split::from_shift(0.0, 2.0).unwrap();
        assert!((homographic_step_split(&p, 0.0, 1.0, s) - 1.0 / 3.0).abs() < 1e-15);
        assert!(Split::from_shift(1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn iterates_stay_nonnegative(k in 0.01f64..10.0, a in -10.0f64..10.0, q in 0.0f64..10.0,
                                     d in 0.0f64..20.0, e in -3i32..=3) {
            prop_assume!(a * a + q * q > 0.0);
            let p = ScalarProblem::new(k, a, q, d).unwrap();
            let dt = 10f64.powi(e);
            for x in iterate(&p, d, dt, 200) {
                prop_assert!(x >= 0.0 && x.is_finite());
            }
        }

        #[test]
        fn converges_when_nondegenerate(k in 0.1f64..5.0, a in -3.0f64..3.0, q in 0.1f64..5.0,
                                        d in 0.0f64..5.0, dt in 0.01f64..5.0) {
            let p = ScalarProblem::new(k, a, q, d).unwrap();
            prop_assume!(degenerate_dt_check(&p, dt));
            let r = geometric_ratio(&p, dt);
            prop_assume!(r.abs() < 0.999);
            let xs = iterate(&p, d, dt, 40_000);
            let x_star = p.diagnostics().x_star;
            prop_assert!(rel(*xs.last().unwrap(), x_star) < 1e-9);
        }
    }
}
