use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::GridShape;
use crate::specialfn::PeriodRatio;

/// Periodic nine-point stencil of the flat Dirichlet form in sheared
/// coordinates `z = p + σq`.
///
/// The form `(|σ|²ψ_p² − 2Re σ ψ_p ψ_q + ψ_q²)/Im σ` is integrated cell by
/// cell, averaging the four corner products of edge differences. Each cell
/// contributes a positive semidefinite 4×4 block that annihilates constants,
/// so the assembled matrix is symmetric, positive semidefinite, and its only
/// kernel is the constant vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicStencil {
    shape: GridShape,
    /// `coeffs[di + 1][dj + 1]` couples node `(i, j)` to `(i + di, j + dj)`.
    coeffs: [[f64; 3]; 3],
}

impl PeriodicStencil {
    pub fn dirichlet_form(sigma: &PeriodRatio, shape: GridShape) -> Result<Self> {
        if shape.n1 < 3 || shape.n2 < 3 {
            return Err(Error::Discretization(format!(
                "stencil needs at least 3 nodes per direction, got {}x{}",
                shape.n1, shape.n2
            )));
        }
        let s = sigma.value();
        let (a, b, c) = (s.norm_sqr() / s.im, -s.re / s.im, 1.0 / s.im);
        let hp = 1.0 / shape.n1 as f64;
        let hq = 1.0 / shape.n2 as f64;

        // Local vertices ordered (0,0), (1,0), (0,1), (1,1).
        let dp_bottom = [-1.0 / hp, 1.0 / hp, 0.0, 0.0];
        let dp_top = [0.0, 0.0, -1.0 / hp, 1.0 / hp];
        let dq_left = [-1.0 / hq, 0.0, 1.0 / hq, 0.0];
        let dq_right = [0.0, -1.0 / hq, 0.0, 1.0 / hq];
        let corners = [(dp_bottom, dq_left), (dp_bottom, dq_right), (dp_top, dq_left), (dp_top, dq_right)];

        let w = hp * hq / 4.0;
        let mut local = [[0.0; 4]; 4];
        for (dp, dq) in &corners {
            for r in 0..4 {
                for k in 0..4 {
                    local[r][k] += w * (a * dp[r] * dp[k] + b * (dp[r] * dq[k] + dq[r] * dp[k]) + c * dq[r] * dq[k]);
                }
            }
        }

        let offset = |v: usize| ((v % 2) as isize, (v / 2) as isize);
        let mut coeffs = [[0.0; 3]; 3];
        for l in 0..4 {
            let (li, lj) = offset(l);
            for k in 0..4 {
                let (ki, kj) = offset(k);
                coeffs[(ki - li + 1) as usize][(kj - lj + 1) as usize] += local[l][k];
            }
        }

        // Pair entries so that K is exactly symmetric, then fix the centre
        // so that K annihilates constants up to one rounding per row.
        let mut off_sum = 0.0;
        for di in 0..3 {
            for dj in 0..3 {
                if (di, dj) == (1, 1) {
                    continue;
                }
                let mirrored = coeffs[2 - di][2 - dj];
                coeffs[di][dj] = 0.5 * (coeffs[di][dj] + mirrored);
            }
        }
        for (di, row) in coeffs.iter().enumerate() {
            for (dj, v) in row.iter().enumerate() {
                if (di, dj) != (1, 1) {
                    off_sum += v;
                }
            }
        }
        coeffs[1][1] = -off_sum;

        let stencil = Self { shape, coeffs };
        let asym = stencil.symmetry_residual();
        if asym != 0.0 {
            return Err(Error::Consistency(format!("stiffness stencil is not symmetric (residual {asym:e})")));
        }
        Ok(stencil)
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn coefficients(&self) -> [[f64; 3]; 3] {
        self.coeffs
    }

    /// `max |K_ij − K_ji|`; exactly zero by construction.
    pub fn symmetry_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for di in 0..3 {
            for dj in 0..3 {
                r = r.max((self.coeffs[di][dj] - self.coeffs[2 - di][2 - dj]).abs());
            }
        }
        r
    }

    /// `y = K x` on the periodic grid.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let GridShape { n1, n2 } = self.shape;
        debug_assert_eq!(x.len(), n1 * n2);
        debug_assert_eq!(y.len(), n1 * n2);
        for j in 0..n2 {
            let rows = [(j + n2 - 1) % n2, j, (j + 1) % n2];
            for i in 0..n1 {
                let cols = [(i + n1 - 1) % n1, i, (i + 1) % n1];
                let mut acc = 0.0;
                for (dj, &r) in rows.iter().enumerate() {
                    for (di, &c) in cols.iter().enumerate() {
                        acc += self.coeffs[di][dj] * x[r * n1 + c];
                    }
                }
                y[j * n1 + i] = acc;
            }
        }
    }

    /// `xᵀ K x`.
    pub fn energy(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    /// Eigenvalue of `K` on the Fourier mode `exp(2πi(k1 i/n1 + k2 j/n2))`.
    pub fn symbol(&self, k1: usize, k2: usize) -> f64 {
        let GridShape { n1, n2 } = self.shape;
        let mut s = 0.0;
        for di in 0..3 {
            for dj in 0..3 {
                let phase =
                    TAU * (k1 as f64 * (di as f64 - 1.0) / n1 as f64 + k2 as f64 * (dj as f64 - 1.0) / n2 as f64);
                s += self.coeffs[di][dj] * phase.cos();
            }
        }
        s
    }
}
