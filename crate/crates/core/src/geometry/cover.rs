use std::fmt;

use num_complex::Complex64;

use super::sphere::rho_times;
use crate::error::{Error, Result};
use crate::moduli::{same_moduli_point, sigma_from_t, t_from_sigma, ModulusPoint};
use crate::specialfn::{theta_with_derivative, PeriodRatio, ThetaCharacteristic};

/// Tolerance for matching the recovered fourth branch value against `t`.
pub const BRANCH_MATCH_TOLERANCE: f64 = 1e-8;

/// The three nonzero half periods of `ℤ + σℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPeriod {
    /// 1/2
    Real,
    /// σ/2
    Imaginary,
    /// (1+σ)/2
    Diagonal,
}

impl HalfPeriod {
    pub const ALL: [HalfPeriod; 3] = [HalfPeriod::Real, HalfPeriod::Imaginary, HalfPeriod::Diagonal];

    pub fn point(&self, sigma: Complex64) -> Complex64 {
        match self {
            HalfPeriod::Real => Complex64::new(0.5, 0.0),
            HalfPeriod::Imaginary => 0.5 * sigma,
            HalfPeriod::Diagonal => 0.5 * (sigma + 1.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HalfPeriod::Real => "1/2",
            HalfPeriod::Imaginary => "sigma/2",
            HalfPeriod::Diagonal => "(1+sigma)/2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|h| h.name() == name)
    }
}

/// Which half period lies over `0`, over `1`, and over the moving branch point `t`.
/// The origin always lies over `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPeriodLabels {
    pub zero: HalfPeriod,
    pub one: HalfPeriod,
    pub branch: HalfPeriod,
}

impl fmt::Display for HalfPeriodLabels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zero={} one={} branch={}", self.zero.name(), self.one.name(), self.branch.name())
    }
}

/// The degree-two map `ℂ/(ℤ+σℤ) → ℂP¹` branched over `{0, 1, ∞, t}`.
///
/// Built from the even elliptic function `f = (θ[1,0](z)/θ[1,1](z))²`, which has
/// a double pole at the origin and is an affine image of ℘. The affine
/// normalization `(f - f(ω₀)) / (f(ω₁) - f(ω₀))` sends two half periods to
/// `0` and `1`; the labeling is chosen among the six assignments so that the
/// third half period lands exactly on `t`.
#[derive(Debug, Clone)]
pub struct CoveringMap {
    sigma: PeriodRatio,
    t: ModulusPoint,
    labels: HalfPeriodLabels,
    offset: Complex64,
    scale: Complex64,
    recovered_t: Complex64,
}

impl CoveringMap {
    pub fn new(sigma: PeriodRatio, t: ModulusPoint) -> Result<Self> {
        let s = sigma.value();
        let mut f_at = [Complex64::new(0.0, 0.0); 3];
        for (slot, h) in f_at.iter_mut().zip(HalfPeriod::ALL) {
            *slot = f_value(h.point(s), &sigma)?.0;
        }
        let scale_ref = f_at.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (f_at[i] - f_at[j]).norm() <= 1e-13 * scale_ref {
                    return Err(Error::Domain(format!("lattice with σ = {s} is degenerate")));
                }
            }
        }

        let mut best: Option<(f64, HalfPeriodLabels, Complex64)> = None;
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let c = 3 - a - b;
                let candidate = (f_at[c] - f_at[a]) / (f_at[b] - f_at[a]);
                let err = (candidate - t.value()).norm() / t.value().norm().max(1.0);
                if best.as_ref().is_none_or(|(e, _, _)| err < *e) {
                    let labels = HalfPeriodLabels {
                        zero: HalfPeriod::ALL[a],
                        one: HalfPeriod::ALL[b],
                        branch: HalfPeriod::ALL[c],
                    };
                    best = Some((err, labels, candidate));
                }
            }
        }
        let (err, labels, recovered_t) = best.expect("six labelings");
        if err > BRANCH_MATCH_TOLERANCE {
            return Err(Error::Consistency(format!(
                "no half-period labeling of σ = {s} reproduces t = {} (closest {recovered_t}, error {err:e})",
                t.value()
            )));
        }
        let offset = f_value(labels.zero.point(s), &sigma)?.0;
        let scale = f_value(labels.one.point(s), &sigma)?.0 - offset;
        Ok(Self { sigma, t, labels, offset, scale, recovered_t })
    }

    /// Uses `σ = sigma_from_t(t)`.
    pub fn for_modulus(t: ModulusPoint) -> Result<Self> {
        Self::new(sigma_from_t(&t)?, t)
    }

    pub fn sigma(&self) -> &PeriodRatio {
        &self.sigma
    }

    pub fn modulus(&self) -> &ModulusPoint {
        &self.t
    }

    pub fn labels(&self) -> HalfPeriodLabels {
        self.labels
    }

    /// The fourth branch value as actually produced by the normalization.
    pub fn recovered_t(&self) -> Complex64 {
        self.recovered_t
    }

    /// Torus points over `0`, `1`, `t` and `∞`.
    pub fn ramification_points(&self) -> [Complex64; 4] {
        let s = self.sigma.value();
        [self.labels.zero.point(s), self.labels.one.point(s), self.labels.branch.point(s), Complex64::new(0.0, 0.0)]
    }

    /// The cone point of the pulled-back metric.
    pub fn cone_point(&self) -> Complex64 {
        self.labels.branch.point(self.sigma.value())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (f, _) = f_value(z, &self.sigma)?;
        Ok((f - self.offset) / self.scale)
    }

    /// `(μ(z), μ'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (f, df) = f_value(z, &self.sigma)?;
        Ok(((f - self.offset) / self.scale, df / self.scale))
    }

    /// `e^{2φ(z)} = ρ(μ(z)) |μ'(z)|²`, the pulled-back conformal factor
    /// relative to the flat metric `|dz|²`.
    pub fn conformal_factor(&self, z: Complex64) -> Result<f64> {
        let (w, dw) = self.eval_with_derivative(z)?;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Singular(format!("z = {z} is the pole of the covering map")));
        }
        let a = w.norm();
        if a == 0.0 || (w - 1.0).norm() == 0.0 {
            return Err(Error::Singular(format!("z = {z} lies over a cone point of the base")));
        }
        if a > 2.0 {
            // |μ'|²/|μ|³ computed as |μ'/μ|²/|μ| to cancel the pole orders.
            let ratio = (dw / w).norm_sqr() / a;
            Ok(rho_times(w, ratio * a * a * a))
        } else {
            Ok(rho_times(w, dw.norm_sqr()))
        }
    }
}

/// `f = (θ[1,0]/θ[1,1])²` and `f'`.
fn f_value(z: Complex64, sigma: &PeriodRatio) -> Result<(Complex64, Complex64)> {
    let (num, dnum) = theta_with_derivative(ThetaCharacteristic::EVEN_10, z, sigma)?;
    let (den, dden) = theta_with_derivative(ThetaCharacteristic::ODD_11, z, sigma)?;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("z = {z} is a lattice point")));
    }
    let r = num / den;
    let dr = (dnum * den - num * dden) / (den * den);
    Ok((r * r, 2.0 * r * dr))
}

/// `μ(z)` for the lattice `ℤ + σℤ`, normalized against `t = t_from_sigma(σ)`.
pub fn covering_map_torus(z: Complex64, sigma: &PeriodRatio) -> Result<Complex64> {
    let t = t_from_sigma(sigma)?;
    CoveringMap::new(*sigma, t)?.eval(z)
}

/// Checks a covering map's branch data against `t` up to the anharmonic group.
pub fn branch_values_match(map: &CoveringMap, tol: f64) -> Result<bool> {
    let recovered = ModulusPoint::new(map.recovered_t())?;
    Ok(same_moduli_point(map.modulus(), &recovered, tol))
}
