//! The four benchmark problems, their closed-form oracles and the vehicle
//! reference solution.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymMatrix};
use crate::lqr::{build_k, ControlPlant};
use crate::scheme::{are_residual, solve_steady, RiccatiProblem, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseName {
    SquareRoot,
    Oscillator,
    Vehicles,
    Wave,
}

impl CaseName {
    pub const ALL: [CaseName; 4] = [
        Self::SquareRoot,
        Self::Oscillator,
        Self::Vehicles,
        Self::Wave,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SquareRoot => "square-root",
            Self::Oscillator => "oscillator",
            Self::Vehicles => "vehicles",
            Self::Wave => "wave",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| Error::InvalidInput(format!("unknown case `{s}`")))
    }
}

/// A benchmark problem with its suggested run parameters.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub name: CaseName,
    pub problem: RiccatiProblem,
    /// Control plant the problem was derived from, when there is one.
    pub plant: Option<ControlPlant>,
    /// Known limit of the iteration.
    pub oracle: Option<SymMatrix>,
    pub dt: f64,
    pub mu: f64,
}

/// `A = 0`, `K = I`, `Q` with eigenvalues `1` and `100`; the limit is `√Q`.
pub fn square_root_case() -> CaseSpec {
    let r = Matrix::from_rows(&[[1.0, -1.0], [1.0, 1.0]]).unwrap();
    let rt = Matrix::from_rows(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap();
    let q = (&(&r * &Matrix::from_diagonal(&[1.0, 100.0])) * &rt)
        .scale(0.5)
        .symmetrize()
        .unwrap();
    let problem = RiccatiProblem::new(Matrix::zeros(2, 2), SymMatrix::identity(2), q).unwrap();
    CaseSpec {
        name: CaseName::SquareRoot,
        problem,
        plant: None,
        oracle: Some(SymMatrix::from_rows(&[[5.5, -4.5], [-4.5, 5.5]]).unwrap()),
        dt: 0.01,
        mu: 0.1,
    }
}

/// Damped oscillator parameters; `alpha` is the scalar control weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub alpha: f64,
    pub omega2: f64,
    pub delta: f64,
    pub b: f64,
}

impl OscillatorParams {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            omega2: 250.0,
            delta: 0.0,
            b: 1.0,
        }
    }
}

/// `A = [[0, 1], [−ω², −2δ]]`, `B = [0; b]`, `R = α`, `Q = ½I`.
pub fn oscillator_case(p: OscillatorParams) -> Result<CaseSpec> {
    if !(p.alpha > 0.0) {
        return Err(Error::InvalidInput(format!(
            "alpha must be positive, got {}",
            p.alpha
        )));
    }
    let a = Matrix::from_rows(&[[0.0, 1.0], [-p.omega2, -2.0 * p.delta]])?;
    let b = Matrix::from_rows(&[[0.0], [p.b]])?;
    let q = SymMatrix::identity(2).scale(0.5);
    let plant = ControlPlant::new(
        a.clone(),
        b,
        SymMatrix::from_diagonal(&[p.alpha]),
        q.clone(),
        SymMatrix::zeros(2),
    )?;
    let k = build_k(&plant)?;
    let problem = RiccatiProblem::new(a, k, q)?;
    Ok(CaseSpec {
        name: CaseName::Oscillator,
        oracle: oscillator_are_solution(p),
        problem,
        plant: Some(plant),
        dt: 0.01,
        mu: 0.1,
    })
}

/// Stabilizing ARE solution of the oscillator in closed form, for `b ≠ 0`.
pub fn oscillator_are_solution(p: OscillatorParams) -> Option<SymMatrix> {
    let kappa = p.b * p.b / p.alpha;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return None;
    }
    let (w, d) = (p.omega2, p.delta);
    let x2 = 0.5 / (w + (w * w + 0.5 * kappa).sqrt());
    let x3 = (2.0 * x2 + 0.5) / (2.0 * d + (4.0 * d * d + kappa * (2.0 * x2 + 0.5)).sqrt());
    let x1 = kappa * x2 * x3 + w * x3 + 2.0 * d * x2;
    SymMatrix::from_rows(&[[x1, x2], [x2, x3]]).ok()
}

/// State weighting of the vehicle string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VehicleWeighting {
    /// `Q = diag(0, 10, 0, …, 10, 0)`: weights the separations. This is the
    /// weighting under which the reference matrix solves the ARE.
    #[default]
    Separations,
    /// `Q = diag(10, 0, 10, …, 0, 10)`: weights the velocities.
    Velocities,
}

pub const VEHICLE_COUNT: usize = 5;
pub const VEHICLE_DIM: usize = 2 * VEHICLE_COUNT - 1;

/// Drag on each velocity and separation rates `ḋ_i = v_i − v_{i+1}`, with
/// states ordered `(v₁, d₁, v₂, d₂, …, v₅)`.
pub fn vehicle_candidate_a() -> Matrix {
    let mut a = Matrix::zeros(VEHICLE_DIM, VEHICLE_DIM);
    for i in 0..VEHICLE_COUNT {
        a[(2 * i, 2 * i)] = -1.0;
    }
    for i in 0..VEHICLE_COUNT - 1 {
        a[(2 * i + 1, 2 * i)] = 1.0;
        a[(2 * i + 1, 2 * i + 2)] = -1.0;
    }
    a
}

pub fn vehicle_k() -> SymMatrix {
    let d: Vec<f64> = (0..VEHICLE_DIM)
        .map(|i| if i % 2 == 0 { 1.0 } else { 0.0 })
        .collect();
    SymMatrix::from_diagonal(&d)
}

pub fn vehicle_q(weighting: VehicleWeighting) -> SymMatrix {
    let on_even = weighting == VehicleWeighting::Velocities;
    let d: Vec<f64> = (0..VEHICLE_DIM)
        .map(|i| if (i % 2 == 0) == on_even { 10.0 } else { 0.0 })
        .collect();
    SymMatrix::from_diagonal(&d)
}

pub fn vehicles_case(a: Option<Matrix>, weighting: VehicleWeighting) -> Result<CaseSpec> {
    let a = a.unwrap_or_else(vehicle_candidate_a);
    if a.rows() != VEHICLE_DIM || a.cols() != VEHICLE_DIM {
        return Err(Error::Dimension(format!(
            "vehicle A must be {VEHICLE_DIM}x{VEHICLE_DIM}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let problem = RiccatiProblem::new(a, vehicle_k(), vehicle_q(weighting))?;
    Ok(CaseSpec {
        name: CaseName::Vehicles,
        problem,
        plant: None,
        oracle: None,
        dt: 0.1,
        mu: 0.1,
    })
}

/// Wave-equation modal system parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveParams {
    pub modes: usize,
    pub c: f64,
    pub length: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Actuator coefficients in the mode basis; identity when `None`.
    pub actuators: Option<Matrix>,
}

impl Default for WaveParams {
    fn default() -> Self {
        Self {
            modes: 5,
            c: 1.0,
            length: 1.0,
            alpha: 1.0,
            beta: 10.0,
            actuators: None,
        }
    }
}

/// Modal eigenvalues `c² j² π² / L²`, `j = 1..N`.
pub fn wave_eigenvalues(p: &WaveParams) -> Vec<f64> {
    (1..=p.modes)
        .map(|j| {
            let w = j as f64 * PI / p.length;
            p.c * p.c * w * w
        })
        .collect()
}

/// `A = [[0, I], [−Λ, 0]]`, `B = [0; C]`, `R = αI`, `Q = βI`.
pub fn wave_case(p: &WaveParams) -> Result<CaseSpec> {
    let n = p.modes;
    if n == 0 {
        return Err(Error::InvalidInput(
            "the wave case needs at least one mode".into(),
        ));
    }
    if !(p.alpha > 0.0 && p.beta >= 0.0 && p.length > 0.0) {
        return Err(Error::InvalidInput(
            "wave case needs alpha > 0, beta >= 0, L > 0".into(),
        ));
    }
    let c = p.actuators.clone().unwrap_or_else(|| Matrix::identity(n));
    if c.rows() != n {
        return Err(Error::Dimension(format!(
            "actuator matrix must have {n} rows, got {}",
            c.rows()
        )));
    }
    let m = c.cols();
    let lambda = wave_eigenvalues(p);
    let mut a = Matrix::zeros(2 * n, 2 * n);
    let mut b = Matrix::zeros(2 * n, m);
    for i in 0..n {
        a[(i, n + i)] = 1.0;
        a[(n + i, i)] = -lambda[i];
        for k in 0..m {
            b[(n + i, k)] = c[(i, k)];
        }
    }
    let q = SymMatrix::identity(2 * n).scale(p.beta);
    let plant = ControlPlant::new(
        a.clone(),
        b,
        SymMatrix::identity(m).scale(p.alpha),
        q.clone(),
        SymMatrix::zeros(2 * n),
    )?;
    let problem = RiccatiProblem::new(a, build_k(&plant)?, q)?;
    Ok(CaseSpec {
        name: CaseName::Wave,
        problem,
        plant: Some(plant),
        oracle: None,
        dt: 0.01,
        mu: 0.001,
    })
}

/// `(1/L) ∫₀^L Φ_i Φ_j dx` with `Φ_j = √2 sin(jπx/L)`, by composite Simpson
/// on `intervals` (rounded up to even) subintervals.
pub fn mode_inner_product(i: usize, j: usize, length: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = length / n as f64;
    let phi = |k: usize, x: f64| 2f64.sqrt() * (k as f64 * PI * x / length).sin();
    let f = |x: f64| phi(i, x) * phi(j, x);
    let mut s = f(0.0) + f(length);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    s * h / 3.0 / length
}

/// Reference solution of the vehicle-string ARE, 9 × 9 with ten decimals.
#[derive(Debug, Clone)]
pub struct Figure13Reference {
    x: SymMatrix,
}

pub const FIGURE13_FILE: &str = "figure13.txt";
const EMBEDDED_FIGURE13: &str = include_str!("../../../data/figure13.txt");
const ABS_SUM: f64 = 106.191_723_081_680_05;
const SPOT_VALUES: [(usize, usize, f64); 4] = [
    (0, 0, 1.3630206938),
    (0, 1, 2.6172154724),
    (4, 4, 1.8056048615),
    (8, 8, 1.3630206938),
];

impl Figure13Reference {
    /// Parses and checks a table of 9 rows of 9 whitespace-separated numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(VEHICLE_DIM);
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::Reference(format!("line {}: cannot parse `{tok}`", lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != VEHICLE_DIM {
                return Err(Error::Reference(format!(
                    "line {}: expected {VEHICLE_DIM} entries, found {}",
                    lineno + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() != VEHICLE_DIM {
            return Err(Error::Reference(format!(
                "expected {VEHICLE_DIM} rows, found {}",
                rows.len()
            )));
        }
        let full = Matrix::from_rows(&rows).map_err(|e| Error::Reference(e.to_string()))?;
        Self::checksum(&full)?;
        Ok(Self {
            x: SymMatrix::from_matrix(&full, 0.0).map_err(|e| Error::Reference(e.to_string()))?,
        })
    }

    fn checksum(m: &Matrix) -> Result<()> {
        let n = VEHICLE_DIM;
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::Reference(format!(
                        "entry ({i}, {j}) breaks symmetry"
                    )));
                }
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                if (m[(i, j)] - sign * m[(n - 1 - i, n - 1 - j)]).abs() > 1e-10 {
                    return Err(Error::Reference(format!(
                        "entry ({i}, {j}) breaks the centro-sign pattern"
                    )));
                }
            }
        }
        for (i, j, v) in SPOT_VALUES {
            if (m[(i, j)] - v).abs() > 1e-10 {
                return Err(Error::Reference(format!(
                    "entry ({i}, {j}) is {} instead of {v}",
                    m[(i, j)]
                )));
            }
        }
        let sum: f64 = m.as_slice().iter().map(|v| v.abs()).sum();
        if (sum - ABS_SUM).abs() > 1e-8 {
            return Err(Error::Reference(format!(
                "absolute entry sum is {sum}, expected {ABS_SUM}"
            )));
        }
        Ok(())
    }

    /// The copy compiled into the library.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_FIGURE13).expect("embedded reference data is valid")
    }

    /// Loads `figure13.txt` from `dir`.
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(FIGURE13_FILE);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Reference(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.x
    }
}

/// Relative ARE residual of the reference for a candidate `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure13Validation {
    pub residual: f64,
    pub accepted: bool,
}

pub const FIGURE13_ACCEPT_TOL: f64 = 1e-6;

/// `‖X K X − AᵗX − XA − Q‖_F / ‖Q‖_F` at the reference `X`; accepted iff
/// `≤ 1e-6`.
pub fn validate_figure13(
    reference: &Figure13Reference,
    a: &Matrix,
    weighting: VehicleWeighting,
) -> Result<Figure13Validation> {
    let case = vehicles_case(Some(a.clone()), weighting)?;
    let q_norm = case.problem.q().frobenius_norm();
    let residual = are_residual(&case.problem, reference.matrix()) / q_norm;
    Ok(Figure13Validation {
        residual,
        accepted: residual <= FIGURE13_ACCEPT_TOL,
    })
}

/// Steady-state reproduction of the reference.
#[derive(Debug, Clone)]
pub struct Figure13Report {
    pub weighting: VehicleWeighting,
    pub validation: Figure13Validation,
    pub converged: bool,
    pub steps: usize,
    pub max_deviation: f64,
    /// Relative ARE residual of the computed limit.
    pub limit_residual: f64,
}

pub const FIGURE13_MATCH_TOL: f64 = 5e-7;

impl Figure13Report {
    pub fn reproduced(&self) -> bool {
        self.validation.accepted && self.converged && self.max_deviation <= FIGURE13_MATCH_TOL
    }
}

pub fn figure13_report(
    reference: &Figure13Reference,
    a: &Matrix,
    weighting: VehicleWeighting,
    params: &SchemeParams,
) -> Result<Figure13Report> {
    let validation = validate_figure13(reference, a, weighting)?;
    let case = vehicles_case(Some(a.clone()), weighting)?;
    let steady = solve_steady(&case.problem, params)?;
    let max_deviation = steady.x.sub(reference.matrix())?.max_abs();
    Ok(Figure13Report {
        weighting,
        validation,
        converged: steady.converged,
        steps: steady.steps(),
        max_deviation,
        limit_residual: are_residual(&case.problem, &steady.x) / case.problem.q().frobenius_norm(),
    })
}
