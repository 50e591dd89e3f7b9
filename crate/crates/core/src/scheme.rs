//! Matrix homographic ("harmonic") scheme for
//! `dX/dt − (XA + AᵗX) + XKX − Q = 0`.
//!
//! With `M = (μ/2)I − A`, one step solves
//!
//! ```text
//! (X_{j+1} − X_j)/Δt + ½(X_j K X_{j+1} + X_{j+1} K X_j) + Mᵗ X_{j+1} + X_{j+1} M = μ X_j + Q
//! ```
//!
//! for `X_{j+1}`, which is the Lyapunov equation `S_jᵗ X + X S_j = Y_j` with
//! `S_j = ½I + (Δt/2) K X_j + Δt M` and `Y_j = (1 + μΔt) X_j + Δt Q`.
//! When `μI − (A + Aᵗ)` is positive definite every iterate stays positive
//! semidefinite, for any `Δt > 0`.

use crate::error::{Error, Result};
use crate::linalg::{max_eigenvalue, sym_eigen, Matrix, SymMatrix, DEFAULT_EIGEN_TOL};
use crate::lyapunov;

/// Absolute PSD tolerance (relative to `max(1, ‖·‖_F)`) applied to data matrices.
pub const DATA_PSD_TOL: f64 = 1e-10;

/// `(A, K, Q, X₀)` of the Riccati differential equation.
#[derive(Debug, Clone)]
pub struct RiccatiProblem {
    a: Matrix,
    k: SymMatrix,
    q: SymMatrix,
    x0: SymMatrix,
}

impl RiccatiProblem {
    /// Problem with `X₀ = 0`.
    pub fn new(a: Matrix, k: SymMatrix, q: SymMatrix) -> Result<Self> {
        let n = k.dim();
        Self::with_initial(a, k, q, SymMatrix::zeros(n))
    }

    pub fn with_initial(a: Matrix, k: SymMatrix, q: SymMatrix, x0: SymMatrix) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || k.dim() != n || q.dim() != n || x0.dim() != n {
            return Err(Error::Dimension(format!(
                "A is {}x{}, K is {}, Q is {}, X0 is {}",
                a.rows(),
                a.cols(),
                k.dim(),
                q.dim(),
                x0.dim()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput(
                "problem dimension must be at least 1".into(),
            ));
        }
        if !a.is_finite() {
            return Err(Error::InvalidInput("A must be finite".into()));
        }
        for (name, m) in [("K", &k), ("Q", &q), ("X0", &x0)] {
            if !m.is_psd(DATA_PSD_TOL)? {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive semidefinite (min eigenvalue {:e})",
                    m.min_eigenvalue()?
                )));
            }
        }
        Ok(Self { a, k, q, x0 })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn k(&self) -> &SymMatrix {
        &self.k
    }

    pub fn q(&self) -> &SymMatrix {
        &self.q
    }

    pub fn x0(&self) -> &SymMatrix {
        &self.x0
    }

    pub fn set_initial(&mut self, x0: SymMatrix) -> Result<()> {
        *self = Self::with_initial(self.a.clone(), self.k.clone(), self.q.clone(), x0)?;
        Ok(())
    }
}

/// Time step, shift and stopping rules of the scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub dt: f64,
    pub mu: f64,
    /// Relative step-difference threshold of [`solve_steady`].
    pub steady_tol: f64,
    pub max_steps: usize,
}

impl SchemeParams {
    pub const DEFAULT_STEADY_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

    pub fn new(dt: f64, mu: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mu must be positive, got {mu}"
            )));
        }
        Ok(Self {
            dt,
            mu,
            steady_tol: Self::DEFAULT_STEADY_TOL,
            max_steps: Self::DEFAULT_MAX_STEPS,
        })
    }

    pub fn with_steady_tol(mut self, tol: f64) -> Self {
        self.steady_tol = tol;
        self
    }

    pub fn with_max_steps(mut self, steps: usize) -> Self {
        self.max_steps = steps;
        self
    }
}

/// A shift `μ` and whether it makes `μI − (A + Aᵗ)` positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuChoice {
    pub mu: f64,
    pub satisfied: bool,
}

pub const DEFAULT_MU_MARGIN: f64 = 0.1;

/// `μ = max(λ_max(A + Aᵗ), 0) + margin`.
pub fn select_mu(a: &Matrix, margin: f64) -> Result<MuChoice> {
    let lmax = max_eigenvalue(&sum_with_transpose(a)?)?;
    let mu = lmax.max(0.0) + margin;
    Ok(MuChoice {
        mu,
        satisfied: mu > 0.0 && mu > lmax,
    })
}

/// Whether a user-supplied `μ` satisfies `μ > 0` and `μ > λ_max(A + Aᵗ)`.
pub fn mu_is_admissible(a: &Matrix, mu: f64) -> Result<bool> {
    let lmax = max_eigenvalue(&sum_with_transpose(a)?)?;
    Ok(mu > 0.0 && mu > lmax)
}

fn sum_with_transpose(a: &Matrix) -> Result<SymMatrix> {
    Ok(a.symmetrize()?.scale(2.0))
}

/// `M = (μ/2) I − A`.
pub fn build_m(a: &Matrix, mu: f64) -> Matrix {
    let n = a.rows();
    &Matrix::identity(n).scale(0.5 * mu) - a
}

/// Lyapunov data `(S_j, Y_j)` of the step from `xj`.
pub fn step_system(
    prob: &RiccatiProblem,
    params: &SchemeParams,
    xj: &SymMatrix,
) -> Result<(Matrix, SymMatrix)> {
    let n = prob.dim();
    if xj.dim() != n {
        return Err(Error::Dimension(format!(
            "iterate is {}x{}, problem is {n}x{n}",
            xj.dim(),
            xj.dim()
        )));
    }
    let dt = params.dt;
    let m = build_m(&prob.a, params.mu);
    let kx = prob.k.to_matrix().multiply(&xj.to_matrix())?;
    let s = &(&Matrix::identity(n).scale(0.5) + &kx.scale(0.5 * dt)) + &m.scale(dt);
    let y = xj.lin_comb(1.0 + params.mu * dt, &prob.q, dt)?;
    Ok((s, y))
}

/// One homographic step `X_j ↦ X_{j+1}`.
pub fn step(prob: &RiccatiProblem, params: &SchemeParams, xj: &SymMatrix) -> Result<SymMatrix> {
    let (s, y) = step_system(prob, params, xj)?;
    lyapunov::solve(&s, &y)
}

/// Frobenius norm of the defining identity of the step, evaluated at
/// `(X_j, X_{j+1})`.
pub fn scheme_residual(
    prob: &RiccatiProblem,
    params: &SchemeParams,
    xj: &SymMatrix,
    xj1: &SymMatrix,
) -> Result<f64> {
    let m = build_m(&prob.a, params.mu);
    let (xj_m, xj1_m, k_m) = (xj.to_matrix(), xj1.to_matrix(), prob.k.to_matrix());
    let n = prob.dim();
    let mut r = xj1.sub(xj)?.to_matrix().scale(1.0 / params.dt);
    let xkx = &(&xj_m * &k_m) * &xj1_m;
    r = &r + &(&xkx + &xkx.transpose()).scale(0.5);
    r = &r + &(&(&m.transpose() * &xj1_m) + &(&xj1_m * &m));
    r = &r - &xj_m.scale(params.mu);
    r = &r - &prob.q.to_matrix();
    debug_assert_eq!(r.rows(), n);
    Ok(r.frobenius_norm())
}

/// `‖XKX − AᵗX − XA − Q‖_F`.
pub fn are_residual(prob: &RiccatiProblem, x: &SymMatrix) -> f64 {
    let xm = x.to_matrix();
    let a = &prob.a;
    let xkx = &(&xm * &prob.k.to_matrix()) * &xm;
    let atx = &a.transpose() * &xm;
    let xa = &xm * a;
    let r = &(&(&xkx - &atx) - &xa) - &prob.q.to_matrix();
    r.frobenius_norm()
}

/// Snapshot of the iterate after step `j`.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub j: usize,
    pub t: f64,
    pub x: SymMatrix,
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    pub are_residual: f64,
    pub min_eig: f64,
}

impl StepRecord {
    pub fn new(prob: &RiccatiProblem, j: usize, dt: f64, x: SymMatrix) -> Result<Self> {
        let eigenvalues = sym_eigen(&x, DEFAULT_EIGEN_TOL)?.eigenvalues;
        let min_eig = eigenvalues.first().copied().unwrap_or(0.0);
        Ok(Self {
            j,
            t: j as f64 * dt,
            are_residual: are_residual(prob, &x),
            min_eig,
            eigenvalues,
            x,
        })
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedEnd,
    Converged,
    MaxSteps,
    /// An explicit baseline left the admissible range at this step.
    Diverged {
        step: usize,
    },
}

/// Step records of one run, starting with the initial state at `j = 0`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    pub records: Vec<StepRecord>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &StepRecord {
        self.records
            .last()
            .expect("trajectory always holds the initial record")
    }

    pub fn dim(&self) -> usize {
        self.last().x.dim()
    }

    pub fn min_eig(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.min_eig)
            .fold(f64::INFINITY, f64::min)
    }
}

fn with_step(err: Error, j: usize) -> Error {
    match err {
        Error::LyapunovSingular { pivot, column, .. } => Error::LyapunovSingular {
            pivot,
            column,
            step: Some(j),
        },
        other => other,
    }
}

/// Runs `floor(t_end/Δt)` steps from `X₀`, recording each iterate.
pub fn integrate(prob: &RiccatiProblem, params: &SchemeParams, t_end: f64) -> Result<Trajectory> {
    if !(t_end >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "t_end must be nonnegative, got {t_end}"
        )));
    }
    let steps = (t_end / params.dt + 1e-9).floor() as usize;
    let mut x = prob.x0.clone();
    let mut records = Vec::with_capacity(steps + 1);
    records.push(StepRecord::new(prob, 0, params.dt, x.clone())?);
    for j in 1..=steps {
        x = step(prob, params, &x).map_err(|e| with_step(e, j))?;
        records.push(StepRecord::new(prob, j, params.dt, x.clone())?);
    }
    Ok(Trajectory {
        dt: params.dt,
        records,
        termination: Termination::ReachedEnd,
    })
}

/// Result of [`solve_steady`].
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Last iterate.
    pub x: SymMatrix,
    pub trajectory: Trajectory,
    pub converged: bool,
    /// `‖X_{j+1} − X_j‖_F / (1 + ‖X_j‖_F)` at the last step.
    pub last_change: f64,
}

impl SteadyState {
    pub fn steps(&self) -> usize {
        self.trajectory.last().j
    }

    /// Turns a non-converged run into [`Error::MaxStepsExceeded`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::MaxStepsExceeded {
                steps: self.steps(),
                last_change: self.last_change,
            })
        }
    }
}

/// Iterates until `‖X_{j+1} − X_j‖_F ≤ steady_tol·(1 + ‖X_j‖_F)` or
/// `max_steps` is reached.
pub fn solve_steady(prob: &RiccatiProblem, params: &SchemeParams) -> Result<SteadyState> {
    let mut x = prob.x0.clone();
    let mut records = vec![StepRecord::new(prob, 0, params.dt, x.clone())?];
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    for j in 1..=params.max_steps {
        let next = step(prob, params, &x).map_err(|e| with_step(e, j))?;
        last_change = next.sub(&x)?.frobenius_norm() / (1.0 + x.frobenius_norm());
        x = next;
        records.push(StepRecord::new(prob, j, params.dt, x.clone())?);
        if last_change <= params.steady_tol {
            converged = true;
            break;
        }
    }
    Ok(SteadyState {
        x,
        trajectory: Trajectory {
            dt: params.dt,
            records,
            termination: if converged {
                Termination::Converged
            } else {
                Termination::MaxSteps
            },
        },
        converged,
        last_change,
    })
}

/// Sufficient conditions for monotone iterates from `X₀ = 0`: `Q` positive
/// definite and `λ_max(½(K X∞ + X∞ K)) < μ + 1/Δt`.
pub fn monotonicity_condition(
    prob: &RiccatiProblem,
    params: &SchemeParams,
    x_inf: &SymMatrix,
) -> Result<bool> {
    let q_min = prob.q.min_eigenvalue()?;
    if !(q_min > DATA_PSD_TOL * prob.q.frobenius_norm().max(1.0)) {
        return Ok(false);
    }
    let kx = prob.k.to_matrix().multiply(&x_inf.to_matrix())?;
    let sym = kx.symmetrize()?;
    Ok(max_eigenvalue(&sym)? < params.mu + 1.0 / params.dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{self, ScalarProblem, Split};
    use proptest::prelude::*;

    fn square_root_problem() -> RiccatiProblem {
        RiccatiProblem::new(
            Matrix::zeros(2, 2),
            SymMatrix::identity(2),
            SymMatrix::from_rows(&[[50.5, -49.5], [-49.5, 50.5]]).unwrap(),
        )
        .unwrap()
    }

    fn root_q() -> SymMatrix {
        SymMatrix::from_rows(&[[5.5, -4.5], [-4.5, 5.5]]).unwrap()
    }

    fn oscillator_a() -> Matrix {
        Matrix::from_rows(&[[0.0, 1.0], [-250.0, 0.0]]).unwrap()
    }

    #[test]
    fn select_mu_examples() {
        let c = select_mu(&Matrix::zeros(2, 2), 0.1).unwrap();
        assert!((c.mu - 0.1).abs() < 1e-15 && c.satisfied);
        let c = select_mu(&oscillator_a(), 0.1).unwrap();
        assert!((c.mu - 249.1).abs() < 1e-9 && c.satisfied);
        assert!(!mu_is_admissible(&oscillator_a(), 0.1).unwrap());
    }

    #[test]
    fn build_m_examples() {
        assert_eq!(
            build_m(&Matrix::zeros(2, 2), 0.1),
            Matrix::identity(2).scale(0.05)
        );
        assert_eq!(build_m(&Matrix::identity(2), 4.0), Matrix::identity(2));
        let m = build_m(
            &Matrix::from_rows(&[[0.0, 1.0], [-250.0, 0.0]]).unwrap(),
            2.0,
        );
        assert_eq!(m, Matrix::from_rows(&[[1.0, -1.0], [250.0, 1.0]]).unwrap());
    }

    #[test]
    fn n1_step_example() {
        let prob = RiccatiProblem::new(
            Matrix::zeros(1, 1),
            SymMatrix::identity(1),
            SymMatrix::identity(1),
        )
        .unwrap();
        let params = SchemeParams::new(1.0, 2.0).unwrap();
        let (s, y) = step_system(&prob, &params, &SymMatrix::zeros(1)).unwrap();
        assert_eq!(s[(0, 0)], 1.5);
        assert_eq!(y.get(0, 0), 1.0);
        let x1 = step(&prob, &params, &SymMatrix::zeros(1))
            .unwrap()
            .get(0, 0);
        assert!((x1 - 1.0 / 3.0).abs() < 1e-15);
        let p = ScalarProblem::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let split = Split::new(1.0, 1.0).unwrap();
        assert!((scalar::homographic_step_split(&p, 0.0, 1.0, split) - x1).abs() < 1e-15);
    }

    #[test]
    fn first_step_system_from_zero() {
        let prob = square_root_problem();
        let params = SchemeParams::new(0.01, 0.1).unwrap();
        let (s, y) = step_system(&prob, &params, &SymMatrix::zeros(2)).unwrap();
        let expected_s = &Matrix::identity(2).scale(0.5) + &build_m(prob.a(), 0.1).scale(0.01);
        assert!(s.sub(&expected_s).unwrap().max_abs() < 1e-16);
        assert!(y.sub(&prob.q().scale(0.01)).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn exact_steady_state_is_fixed() {
        let prob = square_root_problem();
        for &(dt, mu) in &[(0.01, 0.1), (1.0, 1e-6), (100.0, 3.0)] {
            let params = SchemeParams::new(dt, mu).unwrap();
            let next = step(&prob, &params, &root_q()).unwrap();
            assert!(
                next.sub(&root_q()).unwrap().frobenius_norm() <= 1e-10 * root_q().frobenius_norm()
            );
        }
    }

    #[test]
    fn are_residual_examples() {
        let prob = square_root_problem();
        assert!(are_residual(&prob, &root_q()) < 1e-12);
        assert_eq!(
            are_residual(&prob, &SymMatrix::zeros(2)),
            prob.q().frobenius_norm()
        );
        let p = ScalarProblem::new(1.7, -0.4, 2.2, 0.0).unwrap();
        let prob1 = RiccatiProblem::new(
            Matrix::from_diagonal(&[p.a]),
            SymMatrix::from_diagonal(&[p.k]),
            SymMatrix::from_diagonal(&[p.q]),
        )
        .unwrap();
        let xs = SymMatrix::from_diagonal(&[p.diagnostics().x_star]);
        assert!(are_residual(&prob1, &xs) <= 1e-12);
    }

    #[test]
    fn square_root_steady_states() {
        let prob = square_root_problem();
        let st = solve_steady(&prob, &SchemeParams::new(0.01, 0.1).unwrap()).unwrap();
        assert!(st.converged);
        let e = st.x.eigen().unwrap().eigenvalues;
        assert!((e[0] - 1.0).abs() < 1e-6 && (e[1] - 10.0).abs() < 1e-6);
        assert!(st.x.sub(&root_q()).unwrap().max_abs() < 1e-6);

        let params = SchemeParams::new(0.01, 1e6).unwrap().with_max_steps(10_000);
        let st = solve_steady(&prob, &params).unwrap();
        assert!(!st.converged);
        assert_eq!(st.trajectory.termination, Termination::MaxSteps);
        let dev = st.x.sub(&root_q()).unwrap().frobenius_norm() / root_q().frobenius_norm();
        assert!(dev > 0.1, "deviation {dev}");
        assert!(matches!(
            st.require_converged(),
            Err(Error::MaxStepsExceeded { .. })
        ));
    }

    #[test]
    fn n1_steady_matches_scalar_fixed_point() {
        let p = ScalarProblem::new(0.8, 0.6, 1.3, 0.0).unwrap();
        let prob = RiccatiProblem::new(
            Matrix::from_diagonal(&[p.a]),
            SymMatrix::from_diagonal(&[p.k]),
            SymMatrix::from_diagonal(&[p.q]),
        )
        .unwrap();
        let mu = select_mu(prob.a(), 0.1).unwrap().mu;
        let st = solve_steady(&prob, &SchemeParams::new(0.1, mu).unwrap()).unwrap();
        assert!(st.converged);
        let xs = p.diagnostics().x_star;
        assert!((st.x.get(0, 0) - xs).abs() <= 1e-10 * (1.0 + xs));
    }

    #[test]
    fn monotonicity_condition_examples() {
        let prob = square_root_problem();
        let x_inf = root_q();
        assert!(
            monotonicity_condition(&prob, &SchemeParams::new(0.01, 0.1).unwrap(), &x_inf).unwrap()
        );
        assert!(
            !monotonicity_condition(&prob, &SchemeParams::new(1.0, 0.1).unwrap(), &x_inf).unwrap()
        );
        let singular_q = RiccatiProblem::new(
            Matrix::zeros(2, 2),
            SymMatrix::identity(2),
            SymMatrix::from_diagonal(&[1.0, 0.0]),
        )
        .unwrap();
        assert!(!monotonicity_condition(
            &singular_q,
            &SchemeParams::new(0.01, 0.1).unwrap(),
            &x_inf
        )
        .unwrap());
    }

    #[test]
    fn integrate_records_every_step() {
        let prob = square_root_problem();
        let tr = integrate(&prob, &SchemeParams::new(0.01, 0.1).unwrap(), 1.0).unwrap();
        assert_eq!(tr.records.len(), 101);
        for w in tr.records.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!(((w[1].t - w[0].t) - 0.01).abs() < 1e-12);
        }
        assert_eq!(tr.termination, Termination::ReachedEnd);
    }

    #[test]
    fn invalid_inputs() {
        assert!(SchemeParams::new(0.0, 1.0).is_err());
        assert!(SchemeParams::new(1.0, -1.0).is_err());
        assert!(RiccatiProblem::new(
            Matrix::zeros(2, 2),
            SymMatrix::from_diagonal(&[1.0, -1.0]),
            SymMatrix::identity(2)
        )
        .is_err());
        assert!(RiccatiProblem::new(
            Matrix::zeros(3, 3),
            SymMatrix::identity(2),
            SymMatrix::identity(2)
        )
        .is_err());
    }

    #[test]
    fn singular_step_carries_step_index() {
        // S_0 = ½I + Δt(μ/2 I − A) with A = [[c, 1], [−1, c]] and c = 1/(2Δt) + μ/2
        // gives S_0 = Δt·[[0, −1], [1, 0]], a skew coefficient
        let (dt, mu) = (0.5, 1.0);
        let c = 0.5 / dt + 0.5 * mu;
        let a = Matrix::from_rows(&[[c, 1.0], [-1.0, c]]).unwrap();
        let prob = RiccatiProblem::new(a, SymMatrix::identity(2), SymMatrix::identity(2)).unwrap();
        let err = integrate(&prob, &SchemeParams::new(dt, mu).unwrap(), 1.0).unwrap_err();
        assert!(
            matches!(err, Error::LyapunovSingular { step: Some(1), .. }),
            "{err:?}"
        );
    }

    proptest! {
        #[test]
        fn n1_equivalence(k in 0.1f64..5.0, a in -3.0f64..3.0, q in 0.0f64..5.0, x in 0.0f64..10.0,
                          dt_exp in -3.0f64..3.0, extra in 0.0f64..10.0) {
            prop_assume!(a * a + q * q > 0.0);
            let dt = 10f64.powf(dt_exp);
            let mu = (2.0 * a).max(0.0) + extra + 1e-3;
            let p = ScalarProblem::new(k, a, q, 0.0).unwrap();
            let prob = RiccatiProblem::new(
                Matrix::from_diagonal(&[a]),
                SymMatrix::from_diagonal(&[k]),
                SymMatrix::from_diagonal(&[q]),
            ).unwrap();
            let params = SchemeParams::new(dt, mu).unwrap();
            let matrix = step(&prob, &params, &SymMatrix::from_diagonal(&[x])).unwrap().get(0, 0);
            let scalar = scalar::homographic_step_split(&p, x, dt, Split::from_shift(a, mu).unwrap());
            prop_assert!((matrix - scalar).abs() <= 1e-13 * scalar.abs().max(1e-300));
        }

        #[test]
        fn step_satisfies_scheme_identity(seed in prop::collection::vec(-2.0f64..2.0, 48), n in 1usize..=4,
                                          dt_exp in -3i32..=3) {
            let a = Matrix::from_vec(n, n, seed[..n * n].to_vec()).unwrap();
            let g = Matrix::from_vec(n, n, seed[16..16 + n * n].to_vec()).unwrap();
            let h = Matrix::from_vec(n, n, seed[32..32 + n * n].to_vec()).unwrap();
            let k = (&g.transpose() * &g).symmetrize().unwrap();
            let q = (&h.transpose() * &h).symmetrize().unwrap();
            let prob = RiccatiProblem::new(a.clone(), k, q).unwrap();
            let mu = select_mu(&a, 0.1).unwrap().mu;
            let params = SchemeParams::new(10f64.powi(dt_exp), mu).unwrap();
            let mut x = SymMatrix::zeros(n);
            for _ in 0..5 {
                let next = step(&prob, &params, &x).unwrap();
                let r = scheme_residual(&prob, &params, &x, &next).unwrap();
                prop_assert!(r <= 1e-9 * (1.0 / params.dt) * next.frobenius_norm().max(1.0));
                x = next;
            }
        }
    }
}
