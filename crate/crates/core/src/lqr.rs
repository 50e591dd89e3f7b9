//! Linear-quadratic regulator plumbing around Riccati solutions.

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Matrix, SymMatrix};

/// Plant `ẏ = Ay + Bu` with cost weights `R`, `Q` and terminal weight `D`.
#[derive(Debug, Clone)]
pub struct ControlPlant {
    a: Matrix,
    b: Matrix,
    r: SymMatrix,
    q: SymMatrix,
    d: SymMatrix,
}

impl ControlPlant {
    pub fn new(a: Matrix, b: Matrix, r: SymMatrix, q: SymMatrix, d: SymMatrix) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || b.rows() != n || r.dim() != b.cols() || q.dim() != n || d.dim() != n {
            return Err(Error::Dimension(format!(
                "A {}x{}, B {}x{}, R {}, Q {}, D {}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                r.dim(),
                q.dim(),
                d.dim()
            )));
        }
        let r_min = r.min_eigenvalue()?;
        if !(r_min > 1e-12 * r.frobenius_norm()) {
            return Err(Error::InvalidInput(format!(
                "R must be positive definite (min eigenvalue {r_min:e})"
            )));
        }
        for (name, m) in [("Q", &q), ("D", &d)] {
            if !m.is_psd(crate::scheme::DATA_PSD_TOL)? {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive semidefinite"
                )));
            }
        }
        Ok(Self { a, b, r, q, d })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn r(&self) -> &SymMatrix {
        &self.r
    }

    pub fn q(&self) -> &SymMatrix {
        &self.q
    }

    pub fn d(&self) -> &SymMatrix {
        &self.d
    }

    pub fn states(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }
}

/// `R⁻¹ W` for an `m × p` matrix `W`, column by column.
fn r_solve(r: &SymMatrix, w: &Matrix) -> Result<Matrix> {
    let rm = r.to_matrix();
    let mut out = Matrix::zeros(w.rows(), w.cols());
    for c in 0..w.cols() {
        let col = solve_linear(&rm, &w.column(c))?;
        for (i, v) in col.into_iter().enumerate() {
            out[(i, c)] = v;
        }
    }
    Ok(out)
}

/// `K = B R⁻¹ Bᵗ`.
pub fn build_k(plant: &ControlPlant) -> Result<SymMatrix> {
    let bt = plant.b.transpose();
    let k = plant.b.multiply(&r_solve(&plant.r, &bt)?)?;
    k.symmetrize()
}

/// `G = R⁻¹ Bᵗ X`, so that `u = −G y`.
pub fn feedback_gain(plant: &ControlPlant, x: &SymMatrix) -> Result<Matrix> {
    let btx = plant.b.transpose().multiply(&x.to_matrix())?;
    r_solve(&plant.r, &btx)
}

/// Sampled closed-loop trajectory on a uniform grid.
#[derive(Debug, Clone)]
pub struct ClosedLoop {
    pub dt: f64,
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub u: Vec<Vec<f64>>,
}

impl ClosedLoop {
    pub fn norms(&self) -> Vec<f64> {
        self.y.iter().map(|v| norm2(v)).collect()
    }

    pub fn final_norm(&self) -> f64 {
        norm2(self.y.last().expect("closed loop holds the initial state"))
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical RK4 on `ẏ = (A − BG) y` with step `min(dt_sim, 0.1/‖A − BG‖_F)`,
/// shortened so that the grid lands on `t_end`.
pub fn simulate_closed_loop(
    plant: &ControlPlant,
    g: &Matrix,
    y0: &[f64],
    dt_sim: f64,
    t_end: f64,
) -> Result<ClosedLoop> {
    let n = plant.states();
    if g.rows() != plant.inputs() || g.cols() != n || y0.len() != n {
        return Err(Error::Dimension(format!(
            "gain is {}x{}, initial state has length {}, plant has {} states and {} inputs",
            g.rows(),
            g.cols(),
            y0.len(),
            n,
            plant.inputs()
        )));
    }
    if !(dt_sim > 0.0 && dt_sim.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need dt_sim > 0 and t_end >= 0, got {dt_sim} and {t_end}"
        )));
    }
    let closed = &plant.a - &(&plant.b * g);
    let norm = closed.frobenius_norm();
    let h_max = if norm > 0.0 {
        dt_sim.min(0.1 / norm)
    } else {
        dt_sim
    };
    let steps = if t_end == 0.0 {
        0
    } else {
        (t_end / h_max).ceil() as usize
    };
    let h = if steps == 0 {
        h_max
    } else {
        t_end / steps as f64
    };
    let limit = 1e12 * (1.0 + norm2(y0));

    let f = |y: &[f64]| closed.mul_vec(y);
    let control =
        |y: &[f64]| -> Result<Vec<f64>> { Ok(g.mul_vec(y)?.into_iter().map(|v| -v).collect()) };

    let mut t = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut us = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    t.push(0.0);
    us.push(control(&y)?);
    ys.push(y.clone());
    for j in 1..=steps {
        let k1 = f(&y)?;
        let k2 = f(&axpy(&y, 0.5 * h, &k1))?;
        let k3 = f(&axpy(&y, 0.5 * h, &k2))?;
        let k4 = f(&axpy(&y, h, &k3))?;
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let ny = norm2(&y);
        if !ny.is_finite() || ny > limit {
            return Err(Error::Diverged { step: j, norm: ny });
        }
        t.push(j as f64 * h);
        us.push(control(&y)?);
        ys.push(y.clone());
    }
    Ok(ClosedLoop {
        dt: h,
        t,
        y: ys,
        u: us,
    })
}

fn quad_form(m: &SymMatrix, v: &[f64]) -> Result<f64> {
    let mv = m.to_matrix().mul_vec(v)?;
    Ok(mv.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// `J = ½∫(Qy, y) + ½∫(Ru, u) + ½(D y(T), y(T))` by the trapezoidal rule.
pub fn eval_cost(plant: &ControlPlant, y: &[Vec<f64>], u: &[Vec<f64>], dt: f64) -> Result<f64> {
    if y.is_empty() || y.len() != u.len() {
        return Err(Error::Domain(format!(
            "state and control samples must share a nonempty grid ({} vs {})",
            y.len(),
            u.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "grid step must be positive, got {dt}"
        )));
    }
    let mut integrand = Vec::with_capacity(y.len());
    for (yi, ui) in y.iter().zip(u) {
        if yi.len() != plant.states() || ui.len() != plant.inputs() {
            return Err(Error::Domain(
                "sample dimension does not match the plant".into(),
            ));
        }
        integrand.push(quad_form(&plant.q, yi)? + quad_form(&plant.r, ui)?);
    }
    let last = integrand.len() - 1;
    let integral: f64 = integrand
        .iter()
        .enumerate()
        .map(|(i, v)| if i == 0 || i == last { 0.5 * v } else { *v })
        .sum::<f64>()
        * dt;
    let integral = if last == 0 { 0.0 } else { integral };
    Ok(0.5 * integral + 0.5 * quad_form(&plant.d, &y[last])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar_plant(a: f64, b: f64, r: f64) -> ControlPlant {
        ControlPlant::new(
            Matrix::from_diagonal(&[a]),
            Matrix::from_diagonal(&[b]),
            SymMatrix::from_diagonal(&[r]),
            SymMatrix::identity(1),
            SymMatrix::zeros(1),
        )
        .unwrap()
    }

    #[test]
    fn build_k_examples() {
        let osc = ControlPlant::new(
            Matrix::zeros(2, 2),
            Matrix::from_rows(&[[0.0], [1.0]]).unwrap(),
            SymMatrix::from_diagonal(&[0.01]),
            SymMatrix::identity(2),
            SymMatrix::zeros(2),
        )
        .unwrap();
        let k = build_k(&osc).unwrap();
        assert!(
            k.sub(&SymMatrix::from_diagonal(&[0.0, 100.0]))
                .unwrap()
                .max_abs()
                < 1e-12
        );

        let id = ControlPlant::new(
            Matrix::zeros(2, 2),
            Matrix::identity(2),
            SymMatrix::identity(2),
            SymMatrix::identity(2),
            SymMatrix::zeros(2),
        )
        .unwrap();
        assert_eq!(build_k(&id).unwrap(), SymMatrix::identity(2));

        let zero_b = ControlPlant::new(
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 1),
            SymMatrix::identity(1),
            SymMatrix::identity(2),
            SymMatrix::zeros(2),
        )
        .unwrap();
        assert_eq!(build_k(&zero_b).unwrap(), SymMatrix::zeros(2));
    }

    #[test]
    fn gain_examples() {
        let p = scalar_plant(0.5, 2.0, 4.0);
        let g = feedback_gain(&p, &SymMatrix::from_diagonal(&[3.0])).unwrap();
        assert!((g[(0, 0)] - 2.0 * 3.0 / 4.0).abs() < 1e-15);
        assert_eq!(
            feedback_gain(&p, &SymMatrix::zeros(1)).unwrap().max_abs(),
            0.0
        );
    }

    #[test]
    fn decoupled_decay() {
        let p = ControlPlant::new(
            Matrix::identity(2).scale(-1.0),
            Matrix::zeros(2, 1),
            SymMatrix::identity(1),
            SymMatrix::identity(2),
            SymMatrix::zeros(2),
        )
        .unwrap();
        let cl = simulate_closed_loop(&p, &Matrix::zeros(1, 2), &[3.0, -4.0], 0.01, 2.0).unwrap();
        assert!((cl.t.last().unwrap() - 2.0).abs() < 1e-12);
        for (t, n) in cl.t.iter().zip(cl.norms()) {
            assert!((n - 5.0 * (-t).exp()).abs() < 1e-6);
        }
        let zero = simulate_closed_loop(&p, &Matrix::zeros(1, 2), &[0.0, 0.0], 0.01, 1.0).unwrap();
        assert!(zero.norms().iter().all(|&n| n == 0.0));
    }

    #[test]
    fn cost_examples() {
        let p = ControlPlant::new(
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 1),
            SymMatrix::identity(1),
            SymMatrix::identity(2),
            SymMatrix::zeros(2),
        )
        .unwrap();
        let n = 11;
        let y = vec![vec![1.0, 0.0]; n];
        let u = vec![vec![0.0]; n];
        assert!((eval_cost(&p, &y, &u, 0.1).unwrap() - 0.5).abs() < 1e-14);
        let y0 = vec![vec![0.0, 0.0]; n];
        assert_eq!(eval_cost(&p, &y0, &u, 0.1).unwrap(), 0.0);
        assert!(matches!(
            eval_cost(&p, &y, &u[..5], 0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_indefinite_r() {
        assert!(ControlPlant::new(
            Matrix::zeros(1, 1),
            Matrix::identity(1),
            SymMatrix::from_diagonal(&[0.0]),
            SymMatrix::identity(1),
            SymMatrix::zeros(1),
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn k_is_symmetric_psd(n in 1usize..=4, m in 1usize..=3, b in prop::collection::vec(-2.0f64..2.0, 12),
                              r in prop::collection::vec(-1.0f64..1.0, 9)) {
            let bm = Matrix::from_vec(n, m, b[..n * m].to_vec()).unwrap();
            let g = Matrix::from_vec(m, m, r[..m * m].to_vec()).unwrap();
            let rr = (&g.transpose() * &g).symmetrize().unwrap().add(&SymMatrix::identity(m).scale(0.1)).unwrap();
            let plant = ControlPlant::new(Matrix::zeros(n, n), bm, rr, SymMatrix::identity(n), SymMatrix::zeros(n)).unwrap();
            let k = build_k(&plant).unwrap();
            prop_assert!(k.is_psd(1e-10).unwrap());
            let km = k.to_matrix();
            prop_assert_eq!(km.transpose(), km);
        }
    }
}
