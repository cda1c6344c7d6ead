use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use super::stencil::PeriodicStencil;
use crate::error::{Error, Result};
use crate::geometry::GridShape;

/// Knobs of the block Lanczos iteration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EigenOptions {
    pub block_size: usize,
    /// Ritz residual bound, relative to the Ritz value.
    pub tolerance: f64,
    pub seed: u64,
    /// Largest Krylov basis before giving up; `None` picks `max(8M, 240)`.
    pub max_basis: Option<usize>,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { block_size: 8, tolerance: 1e-9, seed: 0x00c0_7e70_5eed, max_basis: None }
    }
}

/// `K⁺` by diagonalization in Fourier space; the zero mode is dropped.
pub(crate) struct PseudoInverse {
    shape: GridShape,
    inv_symbol: Vec<f64>,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

impl PseudoInverse {
    pub(crate) fn new(stencil: &PeriodicStencil) -> Self {
        let shape = stencil.shape();
        let GridShape { n1, n2 } = shape;
        // Stored transposed, index k1 * n2 + k2, to match the column pass.
        let mut inv_symbol = vec![0.0; n1 * n2];
        for k1 in 0..n1 {
            for k2 in 0..n2 {
                if (k1, k2) != (0, 0) {
                    inv_symbol[k1 * n2 + k2] = 1.0 / stencil.symbol(k1, k2);
                }
            }
        }
        let mut planner = FftPlanner::new();
        Self {
            shape,
            inv_symbol,
            fwd1: planner.plan_fft_forward(n1),
            inv1: planner.plan_fft_inverse(n1),
            fwd2: planner.plan_fft_forward(n2),
            inv2: planner.plan_fft_inverse(n2),
        }
    }

    /// Applies `K⁺` to two real vectors at once, packed as `x + i y`; the
    /// symbol is real and even, so the parts do not mix.
    pub(crate) fn apply_pair(&self, x: &[f64], y: Option<&[f64]>, out_x: &mut [f64], out_y: Option<&mut [f64]>) {
        let GridShape { n1, n2 } = self.shape;
        let n = n1 * n2;
        let mut buf: Vec<Complex64> = match y {
            Some(y) => x.iter().zip(y).map(|(a, b)| Complex64::new(*a, *b)).collect(),
            None => x.iter().map(|a| Complex64::new(*a, 0.0)).collect(),
        };
        self.fwd1.process(&mut buf);
        let mut tr = vec![Complex64::new(0.0, 0.0); n];
        transpose(&buf, &mut tr, n1, n2);
        self.fwd2.process(&mut tr);
        for (v, s) in tr.iter_mut().zip(&self.inv_symbol) {
            *v *= *s;
        }
        self.inv2.process(&mut tr);
        transpose(&tr, &mut buf, n2, n1);
        self.inv1.process(&mut buf);
        let scale = 1.0 / n as f64;
        for (o, v) in out_x.iter_mut().zip(&buf) {
            *o = v.re * scale;
        }
        if let Some(out_y) = out_y {
            for (o, v) in out_y.iter_mut().zip(&buf) {
                *o = v.im * scale;
            }
        }
    }
}

/// `dst[c * rows + r] = src[r * cols + c]` for a `rows × cols` row-major source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Output of [`largest_of_compressed`]: the largest eigenvalues `θ` of
/// `H = P D K⁺ D P` in descending order, with bookkeeping.
pub(crate) struct LanczosOutcome {
    pub thetas: Vec<f64>,
    pub max_relative_residual: f64,
    pub basis_size: usize,
    pub block_steps: usize,
}

/// Block Lanczos with full reorthogonalization for the `count` largest
/// eigenvalues of `H = P D K⁺ D P`, where `D = diag(√weight)` and `P`
/// projects out `D·1`. These are `1/λ` for the nonzero eigenvalues of
/// `K x = λ diag(weight) x`.
pub(crate) fn largest_of_compressed(
    stencil: &PeriodicStencil,
    weight: &[f64],
    count: usize,
    opts: &EigenOptions,
) -> Result<LanczosOutcome> {
    let n = weight.len();
    let b = opts.block_size.max(1);
    let max_basis = opts.max_basis.unwrap_or((8 * count).max(240)).min(n - 1);
    if count + 2 * b > max_basis {
        return Err(Error::Discretization(format!(
            "{count} eigenvalues need a basis larger than the limit {max_basis}"
        )));
    }

    let pinv = PseudoInverse::new(stencil);
    let d: Vec<f64> = weight.iter().map(|w| w.sqrt()).collect();
    let dnorm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    let kernel = DVector::from_iterator(n, d.iter().map(|v| v / dnorm));

    let apply_h = |v: &DMatrix<f64>| -> DMatrix<f64> {
        let mut out = DMatrix::zeros(n, v.ncols());
        let mut c = 0;
        while c < v.ncols() {
            let x: Vec<f64> = v.column(c).iter().zip(&d).map(|(a, s)| a * s).collect();
            if c + 1 < v.ncols() {
                let y: Vec<f64> = v.column(c + 1).iter().zip(&d).map(|(a, s)| a * s).collect();
                let mut ox = vec![0.0; n];
                let mut oy = vec![0.0; n];
                pinv.apply_pair(&x, Some(&y), &mut ox, Some(&mut oy));
                for r in 0..n {
                    out[(r, c)] = ox[r] * d[r];
                    out[(r, c + 1)] = oy[r] * d[r];
                }
                c += 2;
            } else {
                let mut ox = vec![0.0; n];
                pinv.apply_pair(&x, None, &mut ox, None);
                for r in 0..n {
                    out[(r, c)] = ox[r] * d[r];
                }
                c += 1;
            }
        }
        out
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut blocks: Vec<DMatrix<f64>> = Vec::new();
    let mut start = DMatrix::from_fn(n, b, |_, _| rng.gen_range(-1.0..1.0));
    project_out(&mut start, &kernel);
    project_out(&mut start, &kernel);
    let (v0, _) = orthonormalize(start, &blocks, &kernel, &mut rng)?;
    blocks.push(v0);

    let mut t = DMatrix::<f64>::zeros(max_basis + b, max_basis + b);
    let mut step = 0;
    loop {
        let j = blocks.len() - 1;
        let mut w = apply_h(&blocks[j]);
        project_out(&mut w, &kernel);
        for _ in 0..2 {
            for (i, q) in blocks.iter().enumerate() {
                let c = q.tr_mul(&w);
                w.gemm(-1.0, q, &c, 1.0);
                let mut view = t.view_mut((i * b, j * b), (b, b));
                view += c;
            }
            project_out(&mut w, &kernel);
        }
        let (next, r) = orthonormalize(w, &blocks, &kernel, &mut rng)?;
        t.view_mut(((j + 1) * b, j * b), (b, b)).copy_from(&r);
        step += 1;

        let k = blocks.len() * b;
        let last = k + b > max_basis;
        if k >= count + b && (step % 4 == 0 || last) {
            let tk = t.view((0, 0), (k, k));
            let sym = (tk + tk.transpose()) * 0.5;
            let eig = SymmetricEigen::new(sym);
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]));
            let mut worst: f64 = 0.0;
            for &idx in order.iter().take(count) {
                let theta = eig.eigenvalues[idx];
                let tail = eig.eigenvectors.view((k - b, idx), (b, 1));
                let res = (&r * tail).norm();
                worst = worst.max(res / theta.abs());
            }
            if worst <= opts.tolerance {
                let thetas = order.iter().take(count).map(|&i| eig.eigenvalues[i]).collect();
                return Ok(LanczosOutcome { thetas, max_relative_residual: worst, basis_size: k, block_steps: step });
            }
            if last {
                return Err(Error::Convergence { what: "block Lanczos", limit: max_basis });
            }
        }
        blocks.push(next);
    }
}

fn project_out(w: &mut DMatrix<f64>, kernel: &DVector<f64>) {
    for mut col in w.column_iter_mut() {
        let c = kernel.dot(&col);
        col.axpy(-c, kernel, 1.0);
    }
}

/// Modified Gram–Schmidt (two passes) against the existing basis, the kernel
/// direction, and earlier columns. Returns the orthonormal block and the
/// triangular factor; columns that vanish are replaced by fresh random
/// directions with a zero entry in the factor.
fn orthonormalize(
    mut w: DMatrix<f64>,
    basis: &[DMatrix<f64>],
    kernel: &DVector<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (n, b) = w.shape();
    let mut r = DMatrix::zeros(b, b);
    for c in 0..b {
        let initial = w.column(c).norm();
        for pass in 0..2 {
            for p in 0..c {
                let q = w.column(p).clone_owned();
                let coef = q.dot(&w.column(c));
                w.column_mut(c).axpy(-coef, &q, 1.0);
                if pass == 0 {
                    r[(p, c)] = coef;
                } else {
                    r[(p, c)] += coef;
                }
            }
        }
        let mut norm = w.column(c).norm();
        if norm <= 1e-10 * initial.max(f64::MIN_POSITIVE) || norm == 0.0 {
            for p in 0..c {
                r[(p, c)] = 0.0;
            }
            let mut fresh = DMatrix::from_fn(n, 1, |_, _| rng.gen_range(-1.0..1.0));
            for _ in 0..2 {
                project_out(&mut fresh, kernel);
                for q in basis {
                    let coef = q.tr_mul(&fresh);
                    fresh.gemm(-1.0, q, &coef, 1.0);
                }
                for p in 0..c {
                    let q = w.column(p).clone_owned();
                    let coef = q.dot(&fresh.column(0));
                    fresh.column_mut(0).axpy(-coef, &q, 1.0);
                }
            }
            let fnorm = fresh.norm();
            if fnorm == 0.0 {
                return Err(Error::Singular("Krylov basis exhausted the space".into()));
            }
            w.column_mut(c).copy_from(&(fresh.column(0) / fnorm));
            norm = 0.0;
        } else {
            w.column_mut(c).unscale_mut(norm);
        }
        r[(c, c)] = norm;
    }
    Ok((w, r))
}
