//! Coordinates on the moduli space of genus-one curves.
//!
//! A curve is presented either as the double cover of the sphere branched over
//! `{0, 1, ∞, t}` or as `ℂ/(ℤ + σℤ)`. The anharmonic group of order six,
//! generated by `t ↦ 1/t` and `t ↦ 1 - t`, acts on `t` without changing the curve.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specialfn::{elliptic_k, elliptic_k_on_cut, theta_nullwert, CutSide, PeriodRatio, ThetaCharacteristic};

/// Branch point `t ∈ ℂ \ {0, 1}` of the double cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusPoint(Complex64);

impl ModulusPoint {
    pub fn new(t: Complex64) -> Result<Self> {
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::Domain(format!("t = {t} is not finite")));
        }
        if t == Complex64::new(0.0, 0.0) || t == Complex64::new(1.0, 0.0) {
            return Err(Error::Domain(format!("t = {t} is a fixed branch point (t must avoid 0 and 1)")));
        }
        Ok(Self(t))
    }

    pub fn real(t: f64) -> Result<Self> {
        Self::new(Complex64::new(t, 0.0))
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// True on the real slice where the period map is evaluated as a limit from above.
    pub fn on_real_cut(&self) -> bool {
        self.0.im == 0.0 && (self.0.re < 0.0 || self.0.re > 1.0)
    }
}

/// The two generators of the anharmonic group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `t ↦ 1/t`
    Invert,
    /// `t ↦ 1 - t`
    Reflect,
}

impl Generator {
    pub fn apply(&self, t: Complex64) -> Complex64 {
        match self {
            Generator::Invert => t.inv(),
            Generator::Reflect => Complex64::new(1.0, 0.0) - t,
        }
    }

    pub fn apply_point(&self, t: &ModulusPoint) -> Result<ModulusPoint> {
        ModulusPoint::new(self.apply(t.value()))
    }
}

/// The orbit of `t` under the anharmonic group, as a multiset of six values.
#[derive(Debug, Clone, PartialEq)]
pub struct GOrbit {
    /// `t, 1/t, 1-t, 1/(1-t), t/(t-1), (t-1)/t` in that order.
    pub members: [Complex64; 6],
    pub canonical: Complex64,
}

impl GOrbit {
    pub fn contains(&self, t: Complex64, tol: f64) -> bool {
        self.members.iter().any(|m| close(*m, t, tol))
    }
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// Orders orbit members by `(|t|, Re t, Im t)`.
fn canonical_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im))
}

pub fn g_orbit(t: &ModulusPoint) -> GOrbit {
    let t = t.value();
    let one = Complex64::new(1.0, 0.0);
    let members = [t, t.inv(), one - t, (one - t).inv(), t / (t - one), (t - one) / t];
    let canonical = *members.iter().min_by(|a, b| canonical_order(a, b)).expect("six members");
    GOrbit { members, canonical }
}

/// Whether `t2` lies within `tol` of the orbit of `t1`.
///
/// The tolerance is absolute for `|t2| ≤ 1` and relative beyond.
pub fn same_moduli_point(t1: &ModulusPoint, t2: &ModulusPoint, tol: f64) -> bool {
    g_orbit(t1).contains(t2.value(), tol)
}

/// Period ratio `σ = i K(1-t) / K(t)` of the curve branched over `{0, 1, ∞, t}`.
///
/// On the real cuts `t < 0` and `t > 1` the value is the limit from `t + i0`.
pub fn sigma_from_t(t: &ModulusPoint) -> Result<PeriodRatio> {
    let tv = t.value();
    let one = Complex64::new(1.0, 0.0);
    let (k, k_comp) = if tv.im == 0.0 && tv.re > 1.0 {
        // t + i0 is above the cut of K; 1 - t - i0 is a regular negative point.
        (elliptic_k_on_cut(tv.re, CutSide::Above)?, elliptic_k(one - tv.re)?)
    } else if tv.im == 0.0 && tv.re < 0.0 {
        (elliptic_k(tv)?, elliptic_k_on_cut(1.0 - tv.re, CutSide::Below)?)
    } else {
        (elliptic_k(tv)?, elliptic_k(one - tv)?)
    };
    let sigma = Complex64::i() * k_comp / k;
    if !(sigma.im > 0.0) {
        return Err(Error::Consistency(format!("period map at t = {tv} left the upper half-plane: {sigma}")));
    }
    PeriodRatio::new(sigma)
}

/// `t = -(θ[1,0](0|σ) / θ[0,1](0|σ))⁴`.
pub fn t_from_sigma(sigma: &PeriodRatio) -> Result<ModulusPoint> {
    let t2 = theta_nullwert(ThetaCharacteristic::EVEN_10, sigma)?;
    let t4 = theta_nullwert(ThetaCharacteristic::EVEN_01, sigma)?;
    ModulusPoint::new(-(t2 / t4).powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::reduce_to_fundamental_domain;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> ModulusPoint {
        ModulusPoint::new(c(re, im)).unwrap()
    }

    fn reduced(s: &PeriodRatio) -> Complex64 {
        reduce_to_fundamental_domain(s).unwrap().reduced().unwrap().sigma
    }

    #[test]
    fn excluded_points() {
        assert!(ModulusPoint::new(c(0.0, 0.0)).is_err());
        assert!(ModulusPoint::new(c(1.0, 0.0)).is_err());
        assert!(ModulusPoint::new(c(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn sigma_at_one_half_is_i() {
        let s = sigma_from_t(&pt(0.5, 0.0)).unwrap();
        assert!((s.value() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sigma_at_small_real_t_is_imaginary() {
        let s = sigma_from_t(&pt(0.1, 0.0)).unwrap().value();
        assert_eq!(s.re, 0.0);
        assert!(s.im > 1.0);
        // reference ratio K(0.9)/K(0.1) from mpmath
        assert!((s.im - 1.5988749701776021).abs() < 1e-14);
    }

    #[test]
    fn reflection_inverts_sigma() {
        let s1 = sigma_from_t(&pt(0.3, 0.2)).unwrap();
        let s2 = sigma_from_t(&pt(0.7, -0.2)).unwrap();
        assert!((s2.value() + s1.value().inv()).norm() < 1e-13);
        assert!((reduced(&s1) - reduced(&s2)).norm() < 1e-12);
    }

    #[test]
    fn t_at_i_is_minus_one() {
        let t = t_from_sigma(&PeriodRatio::new(c(0.0, 1.0)).unwrap()).unwrap();
        assert!((t.value() - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(same_moduli_point(&pt(0.5, 0.0), &t, 1e-12));
    }

    #[test]
    fn t_has_period_two_in_sigma() {
        let s = c(0.37, 0.61);
        let t1 = t_from_sigma(&PeriodRatio::new(s).unwrap()).unwrap().value();
        let t2 = t_from_sigma(&PeriodRatio::new(s + 2.0).unwrap()).unwrap().value();
        assert!((t1 - t2).norm() < 1e-12 * t1.norm());
    }

    #[test]
    fn orbit_of_two() {
        let o = g_orbit(&pt(2.0, 0.0));
        let expect = [2.0, 0.5, -1.0, -1.0, 2.0, 0.5];
        for (m, e) in o.members.iter().zip(expect) {
            assert!((m - c(e, 0.0)).norm() < 1e-15);
        }
        assert_eq!(o.canonical, c(0.5, 0.0));
        assert_eq!(g_orbit(&pt(0.5, 0.0)).canonical, c(0.5, 0.0));
        assert_eq!(g_orbit(&pt(-1.0, 0.0)).canonical, c(0.5, 0.0));
    }

    #[test]
    fn same_point_examples() {
        assert!(same_moduli_point(&pt(2.0, 0.0), &pt(0.5, 0.0), 1e-12));
        assert!(!same_moduli_point(&pt(2.0, 0.0), &pt(3.0, 0.0), 1e-6));
        let t = pt(0.3, -1.7);
        assert!(same_moduli_point(&t, &t, 0.0));
    }

    #[test]
    fn real_cut_sigma_is_limit_from_above() {
        for t in [-3.0, -0.4, 1.3, 6.0] {
            let on = sigma_from_t(&pt(t, 0.0)).unwrap().value();
            let near = sigma_from_t(&pt(t, 1e-11)).unwrap().value();
            assert!((on - near).norm() < 1e-8, "t = {t}: {on} vs {near}");
        }
    }

    proptest! {
        #[test]
        fn orbit_is_closed_under_generators(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            prop_assume!(c(re, im).norm() > 0.05 && (c(re, im) - 1.0).norm() > 0.05);
            let t = pt(re, im);
            let o = g_orbit(&t);
            for m in o.members {
                for g in [Generator::Invert, Generator::Reflect] {
                    prop_assert!(o.contains(g.apply(m), 1e-12));
                }
            }
            let ab = Generator::Invert.apply(Generator::Reflect.apply(t.value()));
            let ba = Generator::Reflect.apply(Generator::Invert.apply(t.value()));
            prop_assert!(o.contains(ab, 1e-12) && o.contains(ba, 1e-12));
            prop_assert!(o.members.contains(&o.canonical));
        }

        #[test]
        fn round_trip_lands_in_orbit(re in -4.0f64..5.0, im in -4.0f64..4.0) {
            prop_assume!(c(re, im).norm() > 0.1 && (c(re, im) - 1.0).norm() > 0.1);
            let t = pt(re, im);
            let back = t_from_sigma(&sigma_from_t(&t).unwrap()).unwrap();
            prop_assert!(same_moduli_point(&t, &back, 1e-9));
        }

        #[test]
        fn generators_give_equivalent_periods(re in -4.0f64..5.0, im in -4.0f64..4.0) {
            prop_assume!(c(re, im).norm() > 0.1 && (c(re, im) - 1.0).norm() > 0.1);
            let t = pt(re, im);
            let base = reduced(&sigma_from_t(&t).unwrap());
            for g in [Generator::Invert, Generator::Reflect] {
                let other = reduced(&sigma_from_t(&g.apply_point(&t).unwrap()).unwrap());
                prop_assert!((base - other).norm() < 1e-9, "{} vs {}", base, other);
            }
        }
    }
}
