use num_complex::Complex64;

use super::{PeriodRatio, Reduction};
use crate::error::{Error, Result};

const MAX_REDUCTION_STEPS: usize = 10_000;

/// Integer matrix `[[a, b], [c, d]]` of determinant one acting by Möbius maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };

    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a as f64 + self.b as f64) / (z * self.c as f64 + self.d as f64)
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Same Möbius map, normalized so that `c > 0` or `c = 0, d > 0`.
    fn normalized(self) -> Self {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }
}

/// Maps σ into `{|Re σ| ≤ 1/2, |σ| ≥ 1}` by translations and inversions.
///
/// The returned ratio keeps the original σ and records the reduced point with
/// its matrix. A ratio that already carries a reduction is reduced again from
/// its original value, so the operation is idempotent.
pub fn reduce_to_fundamental_domain(sigma: &PeriodRatio) -> Result<PeriodRatio> {
    let original = sigma.value();
    let mut z = original;
    let mut g = UnimodularMatrix::IDENTITY;
    for _ in 0..MAX_REDUCTION_STEPS {
        let n = z.re.round();
        if n != 0.0 {
            z.re -= n;
            g = UnimodularMatrix::translation(-(n as i64)).compose(&g);
        }
        if z.norm_sqr() < 1.0 {
            z = -z.inv();
            g = UnimodularMatrix { a: 0, b: -1, c: 1, d: 0 }.compose(&g);
        } else {
            return Ok(PeriodRatio::with_reduction(original, Reduction { sigma: z, matrix: g.normalized() }));
        }
    }
    Err(Error::Convergence { what: "fundamental-domain reduction", limit: MAX_REDUCTION_STEPS })
}
