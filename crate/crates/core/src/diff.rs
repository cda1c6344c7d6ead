//! Wirtinger derivatives of real-valued functions by central differences.

use num_complex::Complex64;

use crate::error::Result;

pub const COARSE_STEP: f64 = 1e-4;
pub const FINE_STEP: f64 = 1e-5;

/// `∂_t f = ½(∂_x f - i ∂_y f)` for real-valued `f(t)`, `t = x + iy`.
///
/// Central differences at steps [`COARSE_STEP`] and [`FINE_STEP`] are
/// combined by one Richardson step, which removes the `h²` error term.
pub fn wirtinger<F>(f: F, t: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let coarse = central(&f, t, COARSE_STEP)?;
    let fine = central(&f, t, FINE_STEP)?;
    let r2 = (COARSE_STEP / FINE_STEP).powi(2);
    Ok((fine * r2 - coarse) / (r2 - 1.0))
}

fn central<F>(f: &F, t: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let dx = (f(t + h)? - f(t - h)?) / (2.0 * h);
    let ih = Complex64::new(0.0, h);
    let dy = (f(t + ih)? - f(t - ih)?) / (2.0 * h);
    Ok(Complex64::new(0.5 * dx, -0.5 * dy))
}
