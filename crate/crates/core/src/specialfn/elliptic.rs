use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

const AGM_MAX_ITERATIONS: usize = 64;
const AGM_TOLERANCE: f64 = 1e-15;

/// Side from which a point on the cut `[1, ∞)` is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// `m + i0`
    Above,
    /// `m - i0`
    Below,
}

/// Arithmetic-geometric mean with the "right" choice of square root at each
/// step (`|a' - b'| ≤ |a' + b'|`), which is the analytic continuation of the
/// real AGM for `Re(b/a) > 0`.
pub fn agm(a: Complex64, b: Complex64) -> Result<Complex64> {
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITERATIONS {
        if (a - b).norm() <= AGM_TOLERANCE * a.norm() {
            return Ok(a);
        }
        let next_a = 0.5 * (a + b);
        let mut next_b = (a * b).sqrt();
        if (next_a - next_b).norm() > (next_a + next_b).norm() {
            next_b = -next_b;
        }
        a = next_a;
        b = next_b;
    }
    Err(Error::Convergence { what: "arithmetic-geometric mean", limit: AGM_MAX_ITERATIONS })
}

/// K expressed through the complementary modulus `k' = √(1-k²)`.
pub fn elliptic_k_from_complement(k_prime: Complex64) -> Result<Complex64> {
    if k_prime.norm() == 0.0 {
        return Err(Error::Singular("K diverges at k² = 1".into()));
    }
    let m = agm(Complex64::new(1.0, 0.0), k_prime)?;
    Ok(FRAC_PI_2 / m)
}

/// Complete elliptic integral of the first kind `K(k²)`, principal branch,
/// cut along `[1, ∞)`.
pub fn elliptic_k(k_squared: Complex64) -> Result<Complex64> {
    if !(k_squared.re.is_finite() && k_squared.im.is_finite()) {
        return Err(Error::Domain(format!("K({k_squared}) is not defined")));
    }
    if k_squared.im == 0.0 && k_squared.re >= 1.0 {
        return Err(Error::Branch(format!("k² = {} lies on the cut [1, ∞)", k_squared.re)));
    }
    elliptic_k_from_complement((Complex64::new(1.0, 0.0) - k_squared).sqrt())
}

/// Boundary value of `K` on the cut, `K(m ± i0)` for real `m > 1`.
pub fn elliptic_k_on_cut(m: f64, side: CutSide) -> Result<Complex64> {
    if m.is_nan() || m <= 1.0 {
        return Err(Error::Domain(format!("{m} is not on the open cut (1, ∞)")));
    }
    // 1 - (m + i0) = -(m-1) - i0, whose principal root is -i√(m-1).
    let root = (m - 1.0).sqrt();
    let k_prime = match side {
        CutSide::Above => Complex64::new(0.0, -root),
        CutSide::Below => Complex64::new(0.0, root),
    };
    elliptic_k_from_complement(k_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Composite Gauss–Legendre (8 nodes) on [0, π/2] split into `panels`.
    fn quadrature_oracle(m: Complex64, panels: usize) -> Complex64 {
        const X: [f64; 4] = [0.1834346424956498, 0.525_532_409_916_329, 0.7966664774136267, 0.9602898564975363];
        const W: [f64; 4] = [0.362_683_783_378_362, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];
        let h = FRAC_PI_2 / panels as f64;
        let f = |th: f64| (c(1.0, 0.0) - m * th.sin().powi(2)).sqrt().inv();
        let mut sum = c(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in X.iter().zip(W) {
                sum += w * (f(mid + 0.5 * h * x) + f(mid - 0.5 * h * x));
            }
        }
        sum * 0.5 * h
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert!((elliptic_k(c(0.0, 0.0)).unwrap() - c(FRAC_PI_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn k_at_one_half() {
        let k = elliptic_k(c(0.5, 0.0)).unwrap();
        assert!((k - c(1.8540746773013719, 0.0)).norm() < 1e-14);
        assert!((k - quadrature_oracle(c(0.5, 0.0), 64)).norm() < 1e-13);
        // self-complementary point
        assert!((k - elliptic_k(c(1.0 - 0.5, 0.0)).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn cut_is_rejected() {
        assert!(matches!(elliptic_k(c(1.5, 0.0)), Err(Error::Branch(_))));
        assert!(matches!(elliptic_k(c(1.0, 0.0)), Err(Error::Branch(_))));
        assert!(elliptic_k(c(1.5, 1e-300)).is_ok());
    }

    #[test]
    fn cut_limits_match_nearby_points() {
        for m in [1.2, 3.0, 17.5] {
            let above = elliptic_k_on_cut(m, CutSide::Above).unwrap();
            let below = elliptic_k_on_cut(m, CutSide::Below).unwrap();
            let near_above = elliptic_k(c(m, 1e-12)).unwrap();
            let near_below = elliptic_k(c(m, -1e-12)).unwrap();
            assert!((above - near_above).norm() < 1e-9 * above.norm());
            assert!((below - near_below).norm() < 1e-9 * below.norm());
            assert!((above - below.conj()).norm() < 1e-13 * above.norm());
            // K(m + i0) = (K(1/m) + i K(1 - 1/m)) / √m
            let expect = (elliptic_k(c(1.0 / m, 0.0)).unwrap()
                + Complex64::i() * elliptic_k(c(1.0 - 1.0 / m, 0.0)).unwrap())
                / m.sqrt();
            assert!((above - expect).norm() < 1e-13 * above.norm());
        }
    }

    #[test]
    fn agrees_with_quadrature_in_unit_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let r: f64 = 0.95 * rng.gen::<f64>().sqrt();
            let th: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let m = Complex64::from_polar(r, th);
            let k = elliptic_k(m).unwrap();
            let q = quadrature_oracle(m, 64);
            assert!((k - q).norm() < 1e-10 * q.norm(), "m = {m}: {k} vs {q}");
        }
    }

    #[test]
    fn agm_of_equal_arguments() {
        assert_eq!(agm(c(2.0, 0.0), c(2.0, 0.0)).unwrap(), c(2.0, 0.0));
    }
}
