//! Lyapunov equation `Sᵗ X + X S = Y` restricted to symmetric `X` and `Y`.
//!
//! The operator `φ_S(X) = Sᵗ X + X S` maps symmetric matrices to symmetric
//! matrices. It is assembled as a dense `N × N` matrix on the symmetric
//! subspace (`N = n(n+1)/2`) using the unnormalized basis `E_ii`,
//! `E_ij + E_ji` (`i < j`). With that basis the coordinates of `X` are exactly
//! its upper-triangle entries, so assembly and extraction share the packed
//! layout of [`SymMatrix`].

use crate::error::{Error, Result};
use crate::linalg::{packed_index, solve_linear, Matrix, SymMatrix};

/// The data `(S, Y)` of one Lyapunov solve.
#[derive(Debug, Clone)]
pub struct LyapunovSystem {
    s: Matrix,
    y: SymMatrix,
}

impl LyapunovSystem {
    pub fn new(s: Matrix, y: SymMatrix) -> Result<Self> {
        if !s.is_square() || s.rows() != y.dim() {
            return Err(Error::Dimension(format!(
                "Lyapunov coefficient is {}x{} but right-hand side is {}x{}",
                s.rows(),
                s.cols(),
                y.dim(),
                y.dim()
            )));
        }
        Ok(Self { s, y })
    }

    pub fn coefficient(&self) -> &Matrix {
        &self.s
    }

    pub fn rhs(&self) -> &SymMatrix {
        &self.y
    }
}

/// `φ_S(X) = Sᵗ X + X S`.
pub fn apply_phi(s: &Matrix, x: &SymMatrix) -> Result<SymMatrix> {
    let n = x.dim();
    if !s.is_square() || s.rows() != n {
        return Err(Error::Dimension(format!(
            "cannot apply phi_S with S {}x{} to a {n}x{n} matrix",
            s.rows(),
            s.cols()
        )));
    }
    let xm = x.to_matrix();
    let xs = xm.multiply(s)?;
    // Sᵗ X = (X S)ᵗ since X is symmetric; the sum is symmetric by construction
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            out.set(i, j, xs[(j, i)] + xs[(i, j)]);
        }
    }
    Ok(out)
}

/// Dense matrix of `φ_S` on the symmetric subspace.
///
/// Column `p = (a, b)` holds the packed upper triangle of `φ_S(B_p)`. Entry
/// `(k, l)` of `φ_S(E_ab)` is `S_ak δ_bl + δ_ka S_bl`.
pub fn assemble_operator(s: &Matrix) -> Result<Matrix> {
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "Lyapunov coefficient must be square, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.rows();
    let dim = n * (n + 1) / 2;
    let mut op = Matrix::zeros(dim, dim);
    let single = |a: usize, b: usize, k: usize, l: usize| -> f64 {
        let mut v = 0.0;
        if b == l {
            v += s[(a, k)];
        }
        if k == a {
            v += s[(b, l)];
        }
        v
    };
    for a in 0..n {
        for b in a..n {
            let col = packed_index(n, a, b);
            for k in 0..n {
                for l in k..n {
                    let row = packed_index(n, k, l);
                    let mut v = single(a, b, k, l);
                    if a != b {
                        v += single(b, a, k, l);
                    }
                    op[(row, col)] = v;
                }
            }
        }
    }
    Ok(op)
}

/// Solves `Sᵗ X + X S = Y` for symmetric `X`.
///
/// Unique solvability is guaranteed when `S + Sᵗ` is positive definite; the
/// solve itself only requires the assembled operator to be nonsingular.
pub fn solve_lyapunov(sys: &LyapunovSystem) -> Result<SymMatrix> {
    let n = sys.y.dim();
    let op = assemble_operator(&sys.s)?;
    let x = solve_linear(&op, sys.y.packed()).map_err(|e| match e {
        Error::Singular { pivot, column, .. } => Error::LyapunovSingular {
            pivot,
            column,
            step: None,
        },
        other => other,
    })?;
    SymMatrix::from_packed(n, x)
}

pub fn solve(s: &Matrix, y: &SymMatrix) -> Result<SymMatrix> {
    solve_lyapunov(&LyapunovSystem::new(s.clone(), y.clone())?)
}
