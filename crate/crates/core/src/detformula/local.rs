//! Local data at the moving branch point: the preimage `s` of `t` under the
//! conformal map, the Taylor coefficients relating the local parameter
//! `u = √(z - s)` to the distinguished parameter `x = √(w - t)`, and the two
//! routes to `b(-∞)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::diff::wirtinger;
use crate::error::{Error, Result};
use crate::geometry::conformal_map_jet;
use crate::moduli::ModulusPoint;

/// `u = A x + B x³ + O(x⁵)` at the preimage `s` of `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTaylorData {
    pub s: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

const REGION_TOLERANCE: f64 = 1e-9;

/// How far `s` is outside the closed quarter disk `{|s| ≤ 1, 0 ≤ arg s ≤ π/2}`,
/// or its mirror image below the real axis when `lower` is set.
fn region_violation(s: Complex64, lower: bool) -> f64 {
    let s = if lower { s.conj() } else { s };
    let radial = (s.norm() - 1.0).max(0.0);
    if s.norm() == 0.0 {
        return radial;
    }
    let arg = s.arg();
    let angular = if arg < 0.0 {
        -arg
    } else if arg > FRAC_PI_2 {
        arg - FRAC_PI_2
    } else {
        0.0
    };
    radial + angular * s.norm()
}

/// Root `s` of `((1 + s²)/(1 - s²))² = t` in the quarter disk mapped onto the
/// closed upper half-plane. For `Im t < 0` the mirror quarter disk
/// `{|s| ≤ 1, -π/2 ≤ arg s ≤ 0}` is used instead, since the quarter disk
/// itself only covers `Im t ≥ 0`.
pub fn s_from_t(t: &ModulusPoint) -> Result<Complex64> {
    let tv = t.value();
    let lower = tv.im < 0.0;
    let one = Complex64::new(1.0, 0.0);
    let root = tv.sqrt();
    let mut best: Option<(f64, Complex64)> = None;
    for g in [root, -root] {
        if (g + one).norm() == 0.0 {
            continue;
        }
        let s2 = (g - one) / (g + one);
        for s in [s2.sqrt(), -s2.sqrt()] {
            let v = region_violation(s, lower);
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, s));
            }
        }
    }
    let (violation, s) = best.ok_or_else(|| Error::Domain(format!("no preimage of t = {tv}")))?;
    if violation > REGION_TOLERANCE {
        return Err(Error::Consistency(format!(
            "preimage of t = {tv} missed the quarter disk (violation {violation:e})"
        )));
    }
    Ok(s)
}

/// Series inversion of `x² = w(s + u²) - t`:
/// `A = 1/√w'(s)` and `B = -w''(s) A⁵ / 4`.
pub fn taylor_ab(t: &ModulusPoint) -> Result<LocalTaylorData> {
    let s = s_from_t(t)?;
    let [_, w1, w2, _] = conformal_map_jet(s)?;
    if w1.norm() < 1e-12 {
        return Err(Error::Singular(format!("w'(s) vanishes at s = {s}")));
    }
    let a = w1.sqrt().inv();
    let b = -0.25 * w2 * a.powi(5);
    Ok(LocalTaylorData { s, a, b })
}

/// `b(-∞) = A² b̂(-∞) - B/A` with `b̂(-∞) = s̄ / (2(1 + |s|²))`.
pub fn b_minus_inf_from_ab(t: &ModulusPoint) -> Result<Complex64> {
    let LocalTaylorData { s, a, b } = taylor_ab(t)?;
    let b_hat = s.conj() / (2.0 * (1.0 + s.norm_sqr()));
    Ok(a * a * b_hat - b / a)
}

/// `¼ ln(|t| |t-1| (|√t+1| + |√t-1|)²)`.
pub(crate) fn quarter_log_metric_inverse(t: Complex64) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let root = t.sqrt();
    let s = (root + one).norm() + (root - one).norm();
    let v = t.norm() * (t - one).norm() * s * s;
    if v == 0.0 {
        return Err(Error::Domain(format!("t = {t} is a fixed branch point")));
    }
    Ok(0.25 * v.ln())
}

/// `b(-∞) = ∂_t ¼ ln(|t| |t-1| (|√t+1| + |√t-1|)²)` as a Wirtinger derivative.
pub fn b_minus_inf_closed(t: &ModulusPoint) -> Result<Complex64> {
    wirtinger(quarter_log_metric_inverse, t.value())
}
