//! The singular spherical metric, the double cover of the sphere by the torus,
//! and the pulled-back conformal factor.

mod cover;
mod field;
mod sphere;

pub use cover::{
    branch_values_match, covering_map_torus, CoveringMap, HalfPeriod, HalfPeriodLabels, BRANCH_MATCH_TOLERANCE,
};
pub use field::{conformal_factor_on_torus, ConformalField, GridShape, SingularPoint};
pub use sphere::{conformal_map, conformal_map_jet, curvature_of, gauss_curvature, metric_rho, CURVATURE_STEP};
