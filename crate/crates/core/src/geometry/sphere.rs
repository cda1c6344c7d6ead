use num_complex::Complex64;

use crate::error::{Error, Result};

/// `w = ((1 + z²) / (1 - z²))²`, sending the closed quarter disk
/// `{|z| ≤ 1, 0 ≤ arg z ≤ π/2}` onto the closed upper half-plane with
/// corners `i, 0, 1 ↦ 0, 1, ∞`.
pub fn conformal_map(z: Complex64) -> Result<Complex64> {
    Ok(conformal_map_jet(z)?[0])
}

/// `[w, w', w'', w''']` at `z`.
pub fn conformal_map_jet(z: Complex64) -> Result<[Complex64; 4]> {
    let one = Complex64::new(1.0, 0.0);
    let z2 = z * z;
    let den = one - z2;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("conformal map has a pole at z = {z}")));
    }
    // g = (1+z²)/(1-z²), w = g²
    let inv = den.inv();
    let g = (one + z2) * inv;
    let g1 = 4.0 * z * inv * inv;
    let g2 = (4.0 + 12.0 * z2) * inv * inv * inv;
    let g3 = (48.0 * z + 48.0 * z * z2) * inv * inv * inv * inv;
    Ok([g * g, 2.0 * g * g1, 2.0 * (g1 * g1 + g * g2), 2.0 * (3.0 * g1 * g2 + g * g3)])
}

/// Conformal factor of the curvature-one metric
/// `|dw|² / (|w| |w-1| (|√w + 1| + |√w - 1|)²)`.
///
/// Either square root of `w` gives the same value; the points `0`, `1` are
/// cone points of angle π where the factor is infinite.
pub fn metric_rho(w: Complex64) -> Result<f64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("metric evaluated at non-finite w = {w}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let a = w.norm();
    let b = (w - one).norm();
    if a == 0.0 || b == 0.0 {
        return Err(Error::Singular(format!("w = {w} is a cone point of the metric")));
    }
    let root = w.sqrt();
    let s = (root + one).norm() + (root - one).norm();
    Ok(1.0 / (a * b * s * s))
}

/// The same factor via `(|√w+1| + |√w-1|)² = 2(1 + |w| + |w-1|)`, written in
/// terms of `1/w` when `|w|` is large so the `|w|⁻³` decay does not underflow
/// in intermediate products.
pub(crate) fn rho_times(w: Complex64, scale_sq: f64) -> f64 {
    let a = w.norm();
    if a <= 2.0 {
        let b = (w - 1.0).norm();
        scale_sq / (2.0 * a * b * (1.0 + a + b))
    } else {
        let u = w.inv();
        let b = (Complex64::new(1.0, 0.0) - u).norm();
        // ρ |w|³ = 1 / (2 |1 - 1/w| (1/|w| + 1 + |1 - 1/w|))
        (scale_sq / (a * a * a)) / (2.0 * b * (u.norm() + 1.0 + b))
    }
}

/// Gaussian curvature `-(1/(2ρ)) Δ ln ρ` of the metric `ρ |dw|²`, with a
/// five-point Laplacian at steps `h` and `h/2` combined by Richardson
/// extrapolation.
pub fn curvature_of<F>(rho: F, w: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step {h} must be positive")));
    }
    let ln_rho = |p: Complex64| rho(p).map(f64::ln);
    let centre = ln_rho(w)?;
    let lap = |h: f64| -> Result<f64> {
        let ih = Complex64::new(0.0, h);
        Ok((ln_rho(w + h)? + ln_rho(w - h)? + ln_rho(w + ih)? + ln_rho(w - ih)? - 4.0 * centre) / (h * h))
    };
    let coarse = lap(h)?;
    let fine = lap(0.5 * h)?;
    let laplacian = (4.0 * fine - coarse) / 3.0;
    Ok(-laplacian / (2.0 * rho(w)?))
}

/// Relative step for [`gauss_curvature`]; smaller steps lose to rounding in
/// `ln ρ`, larger ones to the truncation error near the cone points.
pub const CURVATURE_STEP: f64 = 3e-3;

/// Curvature of the singular spherical metric at `w`.
///
/// `h` is relative to `max(1, |w|)`: far out, `ρ ∼ |w|⁻³/2` is small and an
/// absolute step would let rounding in `ln ρ` dominate after division by `ρ`.
pub fn gauss_curvature(w: Complex64, h: f64) -> Result<f64> {
    let step = h * w.norm().max(1.0);
    let gap = w.norm().min((w - 1.0).norm());
    if gap < 10.0 * step {
        return Err(Error::Domain(format!("step {step} too large: w = {w} is within {gap} of a cone point")));
    }
    curvature_of(metric_rho, w, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn corners_of_the_quarter_disk() {
        assert!(conformal_map(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        assert!((conformal_map(c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(matches!(conformal_map(c(1.0, 0.0)), Err(Error::Singular(_))));
        assert!(conformal_map(c(1.0 - 1e-6, 0.0)).unwrap().norm() > 1e11);
    }

    #[test]
    fn arc_maps_to_real_line() {
        let w = conformal_map(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).unwrap();
        assert!(w.im.abs() < 1e-15);
        // g = (1 + i)/(1 - i) = i, w = -1
        assert!((w - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn jet_matches_complex_differences() {
        let z = c(0.31, 0.42);
        let jet = conformal_map_jet(z).unwrap();
        let h = 1e-4;
        for k in 0..3 {
            let f = |p: Complex64| conformal_map_jet(p).unwrap()[k];
            let d = (f(z + h) - f(z - h)) / (2.0 * h);
            assert!((d - jet[k + 1]).norm() < 1e-6 * jet[k + 1].norm());
        }
    }

    #[test]
    fn pushforward_of_round_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let r: f64 = rng.gen_range(0.02..0.98);
            let th: f64 = rng.gen_range(0.02..FRAC_PI_2 - 0.02);
            let z = Complex64::from_polar(r, th);
            let [w, dw, _, _] = conformal_map_jet(z).unwrap();
            let lhs = metric_rho(w).unwrap() * dw.norm_sqr();
            let rhs = 4.0 / (1.0 + z.norm_sqr()).powi(2);
            assert!((lhs - rhs).abs() < 1e-10 * rhs, "z = {z}");
        }
    }

    #[test]
    fn root_branch_is_irrelevant() {
        for w in [c(3.5, 0.0), c(-2.0, 0.7), c(0.2, -4.0)] {
            let r = w.sqrt();
            let one = Complex64::new(1.0, 0.0);
            let s1 = (r + one).norm() + (r - one).norm();
            let s2 = (-r + one).norm() + (-r - one).norm();
            assert_eq!(s1, s2);
            let rho = metric_rho(w).unwrap();
            assert!((rho - rho_times(w, 1.0)).abs() < 1e-14 * rho);
        }
        // real w > 1: (|√w+1| + |√w-1|)² = 4w
        let w = 3.5;
        assert!((metric_rho(c(w, 0.0)).unwrap() - 1.0 / (w * (w - 1.0) * 4.0 * w)).abs() < 1e-16);
    }

    #[test]
    fn cone_at_infinity() {
        let vals: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&r| {
                let w = Complex64::from_polar(r, 0.7);
                metric_rho(w).unwrap() * r.powi(3)
            })
            .collect();
        for v in &vals {
            assert!((v - 0.25).abs() < 0.01);
        }
        assert!((vals[2] - 0.25).abs() < (vals[0] - 0.25).abs());
    }

    #[test]
    fn curvature_is_one() {
        for w in [c(2.0, 1.0), c(-3.0, 0.0), c(-8.4, -4.3), c(3.8, 9.2), c(40.0, -25.0)] {
            let k = gauss_curvature(w, CURVATURE_STEP).unwrap();
            assert!((k - 1.0).abs() < 1e-6, "K({w}) = {k}");
        }
        let round = |w: Complex64| Ok(4.0 / (1.0 + w.norm_sqr()).powi(2));
        assert!((curvature_of(round, c(0.3, -0.8), 1e-3).unwrap() - 1.0).abs() < 1e-8);
        assert!(gauss_curvature(c(1.005, 0.0), 1e-3).is_err());
        assert!(matches!(metric_rho(c(0.0, 0.0)), Err(Error::Singular(_))));
    }
}
