//! Complex special functions on the upper half-plane.
//!
//! Theta functions use the convention
//!
//! ```text
//! θ[a,b](z|σ) = Σ_{n∈ℤ} exp(iπ(n+a/2)²σ + 2πi(n+a/2)(z+b/2))
//! ```
//!
//! so that θ[0,0], θ[1,0], θ[0,1], θ[1,1] are the classical θ₃, θ₂, θ₄ and −θ₁
//! with `z` measured in units of the real period.

mod elliptic;
mod eta;
mod reduce;
mod theta;

pub use elliptic::{agm, elliptic_k, elliptic_k_from_complement, elliptic_k_on_cut, CutSide};
pub use eta::{dedekind_eta, ln_dedekind_eta};
pub use reduce::{reduce_to_fundamental_domain, UnimodularMatrix};
pub use theta::{theta, theta_nullwert, theta_with_derivative, ThetaSeries, DEFAULT_MAX_THETA_TERMS};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Fundamental-domain data attached to a [`PeriodRatio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    /// Reduced point, `|Re| ≤ 1/2` and `|σ'| ≥ 1`.
    pub sigma: Complex64,
    /// The matrix with `σ' = (aσ+b)/(cσ+d)`.
    pub matrix: UnimodularMatrix,
}

/// The b-period σ of a genus-one surface: a point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRatio {
    sigma: Complex64,
    reduced: Option<Reduction>,
}

impl PeriodRatio {
    pub fn new(sigma: Complex64) -> Result<Self> {
        if !(sigma.re.is_finite() && sigma.im.is_finite()) {
            return Err(Error::Domain(format!("period ratio {sigma} is not finite")));
        }
        if sigma.im <= 0.0 {
            return Err(Error::Domain(format!("period ratio {sigma} is not in the upper half-plane")));
        }
        Ok(Self { sigma, reduced: None })
    }

    pub(crate) fn with_reduction(sigma: Complex64, reduction: Reduction) -> Self {
        Self { sigma, reduced: Some(reduction) }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sigma
    }

    #[inline]
    pub fn im(&self) -> f64 {
        self.sigma.im
    }

    pub fn reduced(&self) -> Option<&Reduction> {
        self.reduced.as_ref()
    }

    /// `q = e^{iπσ}`, the nome used by the theta series.
    pub fn nome(&self) -> Complex64 {
        (Complex64::i() * std::f64::consts::PI * self.sigma).exp()
    }
}

/// Half-integer characteristic `[a, b]` with `a, b ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaCharacteristic {
    a: u8,
    b: u8,
}

impl ThetaCharacteristic {
    pub const EVEN_00: Self = Self { a: 0, b: 0 };
    pub const EVEN_10: Self = Self { a: 1, b: 0 };
    pub const EVEN_01: Self = Self { a: 0, b: 1 };
    pub const ODD_11: Self = Self { a: 1, b: 1 };

    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a > 1 || b > 1 {
            return Err(Error::Domain(format!("theta characteristic [{a},{b}] must have entries in {{0,1}}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> u8 {
        self.a
    }

    pub fn b(&self) -> u8 {
        self.b
    }

    pub fn is_odd(&self) -> bool {
        self.a == 1 && self.b == 1
    }
}
