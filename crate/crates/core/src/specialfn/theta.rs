use std::f64::consts::PI;

use num_complex::Complex64;

use super::{PeriodRatio, ThetaCharacteristic};
use crate::error::{Error, Result};

/// Relative size of the dropped tail, measured against the sum of term magnitudes.
const TAIL_TOLERANCE: f64 = 1e-14;

pub const DEFAULT_MAX_THETA_TERMS: usize = 100_000;

/// Truncated theta series with a configurable term budget.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSeries {
    pub max_terms: usize,
}

impl Default for ThetaSeries {
    fn default() -> Self {
        Self { max_terms: DEFAULT_MAX_THETA_TERMS }
    }
}

impl ThetaSeries {
    pub fn eval(&self, ch: ThetaCharacteristic, z: Complex64, sigma: &PeriodRatio) -> Result<Complex64> {
        self.sum(ch, z, sigma, false).map(|(v, _)| v)
    }

    /// Value and z-derivative.
    pub fn eval_with_derivative(
        &self,
        ch: ThetaCharacteristic,
        z: Complex64,
        sigma: &PeriodRatio,
    ) -> Result<(Complex64, Complex64)> {
        self.sum(ch, z, sigma, true)
    }

    fn sum(
        &self,
        ch: ThetaCharacteristic,
        z: Complex64,
        sigma: &PeriodRatio,
        with_derivative: bool,
    ) -> Result<(Complex64, Complex64)> {
        let s = sigma.value();
        if s.im <= 0.0 {
            return Err(Error::Domain(format!("theta needs Im σ > 0, got {s}")));
        }
        let y = s.im;
        let shift = 0.5 * f64::from(ch.a());
        let zb = z + 0.5 * f64::from(ch.b());
        let growth = 2.0 * PI * z.im.abs();

        let term = |m: f64| -> Complex64 { (Complex64::i() * PI * (m * m * s + 2.0 * m * zb)).exp() };

        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut deriv_magnitude = 0.0;

        for k in 0..self.max_terms {
            let m = k as f64 + shift;
            let ms: &[f64] = if m == 0.0 { &[0.0] } else { &[m, -m] };
            for &mm in ms {
                let tm = term(mm);
                value += tm;
                magnitude += tm.norm();
                if with_derivative {
                    let dm = Complex64::new(0.0, 2.0 * PI * mm) * tm;
                    deriv += dm;
                    deriv_magnitude += dm.norm();
                }
            }

            // Geometric bound on everything beyond index k.
            let next = m + 1.0;
            let log_next = -PI * y * next * next + growth * next;
            let log_ratio = -PI * y * (2.0 * next + 1.0) + growth;
            if log_ratio < 0.0 {
                let rho = log_ratio.exp();
                let t_next = log_next.exp();
                let mut done = 2.0 * t_next / (1.0 - rho) <= TAIL_TOLERANCE * magnitude;
                if with_derivative {
                    let rho_d = rho * (next + 1.0) / next;
                    done &= rho_d < 1.0
                        && 4.0 * PI * next * t_next / (1.0 - rho_d)
                            <= TAIL_TOLERANCE * deriv_magnitude.max(f64::MIN_POSITIVE);
                }
                if done {
                    return Ok((value, deriv));
                }
            }
        }
        Err(Error::Convergence { what: "theta series", limit: self.max_terms })
    }
}

/// θ[a,b](z|σ) with the default term budget.
pub fn theta(ch: ThetaCharacteristic, z: Complex64, sigma: &PeriodRatio) -> Result<Complex64> {
    ThetaSeries::default().eval(ch, z, sigma)
}

pub fn theta_with_derivative(
    ch: ThetaCharacteristic,
    z: Complex64,
    sigma: &PeriodRatio,
) -> Result<(Complex64, Complex64)> {
    ThetaSeries::default().eval_with_derivative(ch, z, sigma)
}

/// θ[a,b](0|σ).
pub fn theta_nullwert(ch: ThetaCharacteristic, sigma: &PeriodRatio) -> Result<Complex64> {
    theta(ch, Complex64::new(0.0, 0.0), sigma)
}
