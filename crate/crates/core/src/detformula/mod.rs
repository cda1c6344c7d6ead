//! Closed-form determinant of the Friedrichs Laplacian for the curvature-one
//! metric with one cone point of angle 4π, and the identities it rests on.
//!
//! Every determinant is carried as a logarithm defined up to a single
//! additive constant shared by all moduli; only differences are meaningful.

mod local;

pub use local::{b_minus_inf_closed, b_minus_inf_from_ab, s_from_t, taylor_ab, LocalTaylorData};

use num_complex::Complex64;
use serde::Serialize;

use crate::diff::wirtinger;
use crate::error::{Error, Result};
use crate::moduli::{sigma_from_t, ModulusPoint};
use crate::specialfn::{ln_dedekind_eta, PeriodRatio};

/// `log det Δ`, up to an unknown universal additive constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetValue {
    pub log_value: f64,
    pub up_to_constant: bool,
}

impl DetValue {
    pub(crate) fn up_to_constant(log_value: f64) -> Result<Self> {
        if !log_value.is_finite() {
            return Err(Error::Consistency(format!("log-determinant {log_value} is not finite")));
        }
        Ok(Self { log_value, up_to_constant: true })
    }

    /// `self - other` on the log scale.
    pub fn difference(&self, other: &DetValue) -> f64 {
        self.log_value - other.log_value
    }
}

fn branch_sum(t: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let root = t.sqrt();
    (root - one).norm() + (root + one).norm()
}

/// `ln F(t)` where `F(t) = |t|^{1/24} |t-1|^{1/24} / (|√t - 1| + |√t + 1|)^{1/4}`.
pub fn ln_conical_factor(t: &ModulusPoint) -> f64 {
    let tv = t.value();
    ((tv.norm() * (tv - 1.0).norm()).ln()) / 24.0 - 0.25 * branch_sum(tv).ln()
}

/// `F(t)`, the correction to the flat determinant. Invariant under `t ↦ 1/t`
/// and `t ↦ 1 - t`.
pub fn conical_factor(t: &ModulusPoint) -> f64 {
    ln_conical_factor(t).exp()
}

/// `log(Im σ |η(σ)|⁴)`, the determinant of the unit-area flat torus.
pub fn flat_det(sigma: &PeriodRatio) -> Result<DetValue> {
    let ln_eta = ln_dedekind_eta(sigma)?;
    DetValue::up_to_constant(sigma.im().ln() + 4.0 * ln_eta.re)
}

/// `log det Δ(t) = log(Im σ |η(σ)|⁴ F(t))` with `σ = sigma_from_t(t)`.
pub fn det_value(t: &ModulusPoint) -> Result<DetValue> {
    let flat = flat_det(&sigma_from_t(t)?)?;
    DetValue::up_to_constant(flat.log_value + ln_conical_factor(t))
}

/// Base point for continuing the twelfth root in [`tau_bergman`].
pub const TAU_BASE_POINT: Complex64 = Complex64::new(0.25, 0.25);

/// `ln |τ(t)| = 2 ln|η(σ)| + (1/12) ln|t(t-1)|`.
pub fn ln_abs_tau(t: &ModulusPoint) -> Result<f64> {
    let tv = t.value();
    let sigma = sigma_from_t(t)?;
    Ok(2.0 * ln_dedekind_eta(&sigma)?.re + (tv.norm() * (tv - 1.0).norm()).ln() / 12.0)
}

/// Bergman tau-function of the two-sheeted cover, up to a constant factor:
/// `τ = η²(σ) [v(∞)³ / (v(P₁) v(P₂) v(Q))]^{1/12}` with
/// `v(P₁) ∼ 1/√t`, `v(P₂) ∼ 1/√(t-1)`, `v(Q) ∼ 1/√(t(t-1))`, `v(∞) ∼ 1`.
///
/// The bracket is `√t √(t-1) √(t(t-1)) = ±t(t-1)`; its twelfth root is
/// continued along the segment from [`TAU_BASE_POINT`], where the sign is
/// fixed by principal roots. `η²(σ)` uses the principal period map.
pub fn tau_bergman(t: &ModulusPoint) -> Result<Complex64> {
    let tv = t.value();
    let sigma = sigma_from_t(t)?;
    let eta_sq = (2.0 * ln_dedekind_eta(&sigma)?).exp();
    Ok(eta_sq * twelfth_root_continued(tv)?)
}

fn twelfth_root_continued(t: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let h = |z: Complex64| z * (z - one);
    let t0 = TAU_BASE_POINT;
    for p in [Complex64::new(0.0, 0.0), one] {
        if segment_distance(t0, t, p) < 1e-12 {
            return Err(Error::Domain(format!("continuation path from {t0} to {t} runs through the branch point {p}")));
        }
    }
    let g0 = t0.sqrt() * (t0 - one).sqrt() * h(t0).sqrt();
    let sign_phase = if (g0 / h(t0)).re > 0.0 { 0.0 } else { std::f64::consts::PI };

    let mut steps = 64;
    'refine: loop {
        let mut arg = h(t0).arg();
        let mut prev = h(t0);
        for k in 1..=steps {
            let z = t0 + (t - t0) * (k as f64 / steps as f64);
            let cur = h(z);
            let d = (cur / prev).arg();
            if d.abs() > std::f64::consts::FRAC_PI_4 {
                steps *= 2;
                if steps > 1 << 20 {
                    return Err(Error::Convergence { what: "tau continuation", limit: 1 << 20 });
                }
                continue 'refine;
            }
            arg += d;
            prev = cur;
        }
        let modulus = h(t).norm().powf(1.0 / 12.0);
        return Ok(Complex64::from_polar(modulus, (arg + sign_phase) / 12.0));
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (a + ab * s - p).norm()
}

/// `log(Im σ |τ(t)|² (|t| |t-1| (|√t+1| + |√t-1|)²)^{-1/8})`.
pub fn det_prelim(t: &ModulusPoint) -> Result<DetValue> {
    let tv = t.value();
    let sigma = sigma_from_t(t)?;
    let s = branch_sum(tv);
    let metric = (tv.norm() * (tv - 1.0).norm() * s * s).ln();
    DetValue::up_to_constant(sigma.im().ln() + 2.0 * ln_abs_tau(t)? - metric / 8.0)
}

/// `∂_t log det Δ(t)` by Wirtinger differences of [`det_value`].
pub fn dt_log_det(t: &ModulusPoint) -> Result<Complex64> {
    wirtinger(|z| Ok(det_value(&ModulusPoint::new(z)?)?.log_value), t.value())
}

/// `∂_t log τ`, obtained as `∂_t ln|τ|²` since τ is holomorphic in `t`.
///
/// Only meaningful where a difference stencil around `t` does not straddle
/// the real cuts of the period map.
pub fn dt_log_tau(t: &ModulusPoint) -> Result<Complex64> {
    wirtinger(|z| Ok(2.0 * ln_abs_tau(&ModulusPoint::new(z)?)?), t.value())
}

/// `∂_t log Im σ`, with the same caveat as [`dt_log_tau`].
pub fn dt_log_im_sigma(t: &ModulusPoint) -> Result<Complex64> {
    wirtinger(|z| Ok(sigma_from_t(&ModulusPoint::new(z)?)?.im().ln()), t.value())
}

/// `b(0) = -S_Sch(x)/6 |_{x=0}`, eliminated through the Bergman connection
/// and the Rauch formula as `2 ∂_t log τ + 2 ∂_t log Im σ`.
///
/// The two derivatives share one stencil, so they are differenced as a sum;
/// `Im σ |τ|²` is unchanged by the monodromy of σ, which keeps the result
/// valid on and near the real cuts.
pub fn schiffer_b0(t: &ModulusPoint) -> Result<Complex64> {
    let combined = |z: Complex64| -> Result<f64> {
        let p = ModulusPoint::new(z)?;
        Ok(2.0 * ln_abs_tau(&p)? + sigma_from_t(&p)?.im().ln())
    };
    Ok(2.0 * wirtinger(combined, t.value())?)
}

/// Residual of `∂_t log det = ½(b(0) - b(-∞))`.
pub fn variational_residual(t: &ModulusPoint) -> Result<f64> {
    let lhs = dt_log_det(t)?;
    let rhs = 0.5 * (schiffer_b0(t)? - b_minus_inf_closed(t)?);
    Ok((lhs - rhs).norm())
}
