use std::f64::consts::PI;

use num_complex::Complex64;

use super::PeriodRatio;
use crate::error::{Error, Result};

const MAX_REDUCTION_STEPS: usize = 10_000;
const MAX_PRODUCT_TERMS: usize = 200;

/// A logarithm of the Dedekind eta function.
///
/// σ is first carried into the fundamental domain through translations and
/// the inversion `σ ↦ -1/σ`, accumulating the multipliers
/// `η(σ+1) = e^{iπ/12} η(σ)` and `η(-1/σ) = √(-iσ) η(σ)` in log form, then
/// `log η = iπσ/12 + Σ log(1 - qⁿ)` is summed with `|q| ≤ e^{-π√3}`.
/// The real part is `ln|η(σ)|` and stays finite where `η` itself underflows.
pub fn ln_dedekind_eta(sigma: &PeriodRatio) -> Result<Complex64> {
    let mut z = sigma.value();
    if z.im <= 0.0 {
        return Err(Error::Domain(format!("eta needs Im σ > 0, got {z}")));
    }
    let mut offset = Complex64::new(0.0, 0.0);
    let mut steps = 0;
    loop {
        let n = z.re.round();
        if n != 0.0 {
            z.re -= n;
            offset += Complex64::new(0.0, PI * n / 12.0);
        }
        if z.norm_sqr() >= 1.0 {
            break;
        }
        offset -= 0.5 * (-Complex64::i() * z).ln();
        z = -z.inv();
        steps += 1;
        if steps > MAX_REDUCTION_STEPS {
            return Err(Error::Convergence { what: "eta modular reduction", limit: MAX_REDUCTION_STEPS });
        }
    }

    let q = (2.0 * PI * Complex64::i() * z).exp();
    let abs_q = q.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for _ in 0..MAX_PRODUCT_TERMS {
        sum += (Complex64::new(1.0, 0.0) - qn).ln();
        qn *= q;
        // |Σ_{m>n} log(1 - q^m)| ≤ 2|q|^{n+1} / (1 - |q|)
        if 2.0 * qn.norm() / (1.0 - abs_q) < 1e-17 {
            return Ok(offset + Complex64::new(0.0, PI / 12.0) * z + sum);
        }
    }
    Err(Error::Convergence { what: "eta product", limit: MAX_PRODUCT_TERMS })
}

/// η(σ) = q^{1/24} ∏ (1 - qⁿ), `q = e^{2πiσ}`.
pub fn dedekind_eta(sigma: &PeriodRatio) -> Result<Complex64> {
    ln_dedekind_eta(sigma).map(Complex64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eta(z: Complex64) -> Complex64 {
        dedekind_eta(&PeriodRatio::new(z).unwrap()).unwrap()
    }

    /// Raw product with a fixed number of factors, no reduction.
    fn product_oracle(z: Complex64, factors: usize) -> Complex64 {
        let q = (2.0 * PI * Complex64::i() * z).exp();
        let mut prod = (Complex64::i() * PI * z / 12.0).exp();
        let mut qn = q;
        for _ in 0..factors {
            prod *= Complex64::new(1.0, 0.0) - qn;
            qn *= q;
        }
        prod
    }

    #[test]
    fn value_at_i() {
        let v = eta(c(0.0, 1.0));
        // Γ(1/4) / (2 π^{3/4})
        assert!((v - c(0.7682254223260567, 0.0)).norm() < 1e-15);
        assert!((v - product_oracle(c(0.0, 1.0), 60)).norm() < 1e-15);
    }

    #[test]
    fn translation_by_one() {
        let v = eta(c(1.0, 1.0));
        let expect = Complex64::from_polar(1.0, PI / 12.0) * eta(c(0.0, 1.0));
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn decays_up_the_imaginary_axis() {
        let e1 = eta(c(0.0, 1.0));
        let e2 = eta(c(0.0, 2.0));
        assert!(e2.norm() < e1.norm());
        assert!((e2 - product_oracle(c(0.0, 2.0), 40)).norm() < 1e-15);
        assert!((e2 - c(0.592_382_781_332_416, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn log_form_survives_tiny_imaginary_part() {
        // |η(iy)| = y^{-1/2} |η(i/y)| ~ y^{-1/2} e^{-π/(12y)}
        let y = 1e-4;
        let l = ln_dedekind_eta(&PeriodRatio::new(c(0.0, y)).unwrap()).unwrap();
        let expect = -0.5 * y.ln() - PI / (12.0 * y);
        assert!((l.re - expect).abs() < 1e-9 * expect.abs());
        assert_eq!(eta(c(0.0, y)), c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn modular_transformation_laws(re in -3.0f64..3.0, im in 0.05f64..3.0) {
            let z = c(re, im);
            let e = eta(z);
            let shifted = eta(z + 1.0);
            prop_assert!((shifted - Complex64::from_polar(1.0, PI / 12.0) * e).norm() <= 1e-12 * e.norm());
            let inverted = eta(-z.inv());
            prop_assert!((inverted - (-Complex64::i() * z).sqrt() * e).norm() <= 1e-12 * inverted.norm());
        }

        #[test]
        fn agrees_with_raw_product_in_upper_region(re in -0.5f64..0.5, im in 0.8f64..3.0) {
            let z = c(re, im);
            let e = eta(z);
            prop_assert!((e - product_oracle(z, 80)).norm() <= 1e-13 * e.norm());
        }
    }
}
