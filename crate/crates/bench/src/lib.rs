//! Fixtures shared by the criterion benches.

use conetorus::moduli::ModulusPoint;
use num_complex::Complex64;

/// Branch points spread over the moduli plane: near the fixed points, on both
/// real cuts and well off the axis.
pub fn sample_moduli() -> Vec<ModulusPoint> {
    [(0.3, 0.2), (0.5, 0.0), (2.0, 0.0), (-0.6, 0.8), (0.06, 0.01), (12.0, -5.0)]
        .into_iter()
        .map(|(re, im)| ModulusPoint::new(Complex64::new(re, im)).expect("fixture avoids 0 and 1"))
        .collect()
}
