use std::f64::consts::TAU;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use conetorus::detformula::{conical_factor, det_value, ln_abs_tau, ln_conical_factor, tau_bergman};
use conetorus::geometry::{conformal_factor_on_torus, GridShape};
use conetorus::moduli::{g_orbit, t_from_sigma, ModulusPoint};
use conetorus::specialfn::reduce_to_fundamental_domain;
use conetorus::spectral::{
    assemble, lowest_eigenvalues, weyl_check, zeta_det_estimate, WEYL_MIN_MODES, ZETA_MIN_MODES,
};
use serde_json::{json, Map, Value};

use crate::report::{complex, normalize, num, Report};
use crate::tolerances::Tolerances;
use crate::{Failure, Given, Surface};

/// Records the coordinate the user gave.
pub fn record_surface(report: &mut Report, s: &Surface) {
    match s.given {
        Given::T => report.inputs.insert("t".into(), complex(s.t.value())),
        Given::Sigma => report.inputs.insert("sigma".into(), complex(s.sigma.value())),
    };
}

fn residual(max: f64, tolerance: f64) -> Value {
    json!({ "max": num(max), "tolerance": num(tolerance), "pass": max <= tolerance })
}

pub fn det(s: &Surface, tol: &Tolerances) -> Result<Report, Failure> {
    let mut r = Report::new("det");
    record_surface(&mut r, s);
    let d = det_value(&s.t)?;
    let orbit = g_orbit(&s.t);
    let mut spread: f64 = 0.0;
    for m in orbit.members {
        spread = spread.max((det_value(&ModulusPoint::new(m)?)?.log_value - d.log_value).abs());
    }
    r.outputs.insert("log_det".into(), num(d.log_value));
    r.outputs.insert("up_to_constant".into(), Value::Bool(d.up_to_constant));
    r.outputs.insert("t".into(), complex(s.t.value()));
    r.outputs.insert("sigma".into(), complex(s.sigma.value()));
    r.outputs.insert("conical_factor".into(), num(conical_factor(&s.t)));
    r.outputs.insert("ln_conical_factor".into(), num(ln_conical_factor(&s.t)));
    r.outputs.insert("orbit_representative".into(), complex(orbit.canonical));
    r.residuals.insert("orbit_spread".into(), residual(spread, tol.get("orbit")));
    r.pass = spread <= tol.get("orbit");
    Ok(r)
}

pub fn sigma(s: &Surface) -> Result<Report, Failure> {
    let mut r = Report::new("sigma");
    record_surface(&mut r, s);
    let reduced = reduce_to_fundamental_domain(&s.sigma)?;
    let back = t_from_sigma(&s.sigma)?.value();
    let distance =
        g_orbit(&s.t).members.iter().map(|m| (m - back).norm() / m.norm().max(1.0)).fold(f64::INFINITY, f64::min);
    r.outputs.insert("sigma".into(), complex(s.sigma.value()));
    r.outputs.insert("sigma_reduced".into(), complex(reduced.reduced().map_or(s.sigma.value(), |red| red.sigma)));
    r.outputs.insert("t".into(), complex(s.t.value()));
    r.residuals.insert("orbit_distance".into(), num(distance));
    Ok(r)
}

pub fn orbit(s: &Surface) -> Result<Report, Failure> {
    let mut r = Report::new("orbit");
    record_surface(&mut r, s);
    let o = g_orbit(&s.t);
    r.outputs.insert("members".into(), Value::Array(o.members.iter().map(|m| complex(*m)).collect()));
    r.outputs.insert("canonical".into(), complex(o.canonical));
    Ok(r)
}

pub fn tau(s: &Surface) -> Result<Report, Failure> {
    let mut r = Report::new("tau");
    record_surface(&mut r, s);
    let tau = tau_bergman(&s.t)?;
    let ln_abs = ln_abs_tau(&s.t)?;
    r.outputs.insert("tau".into(), complex(tau));
    r.outputs.insert("ln_abs_tau".into(), num(ln_abs));
    r.residuals.insert("modulus_consistency".into(), num((tau.norm().ln() - ln_abs).abs()));
    Ok(r)
}

pub fn spectrum(s: &Surface, n: usize, modes: usize, tol: &Tolerances) -> Result<Report, Failure> {
    let mut r = Report::new("spectrum");
    record_surface(&mut r, s);
    r.inputs.insert("grid".into(), json!(n));
    r.inputs.insert("modes".into(), json!(modes));
    let spec = lowest_eigenvalues(&assemble(s.sigma, s.t, GridShape::square(n))?, modes)?;
    let value = serde_json::to_value(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    r.outputs.insert("spectrum".into(), normalize(value));
    if modes >= WEYL_MIN_MODES {
        r.outputs.insert("weyl_slope".into(), num(weyl_check(&spec)?));
    }
    if modes >= ZETA_MIN_MODES {
        r.outputs.insert("zeta_log_det_estimate".into(), num(zeta_det_estimate(&spec)?.log_value));
    }
    let zero = spec.diagnostics.zero_mode_residual;
    r.residuals.insert("zero_mode".into(), residual(zero, tol.get("zero_mode")));
    r.residuals.insert("ritz".into(), num(spec.diagnostics.ritz_residual));
    r.residuals.insert("stiffness_symmetry".into(), num(spec.diagnostics.symmetry_residual));
    r.pass = zero <= tol.get("zero_mode");
    Ok(r)
}

pub fn field_dump(s: &Surface, n: usize, path: &Path, tol: &Tolerances) -> Result<Report, Failure> {
    let mut r = Report::new("field-dump");
    record_surface(&mut r, s);
    r.inputs.insert("grid".into(), json!(n));
    let field = conformal_factor_on_torus(s.sigma, s.t, GridShape::square(n))?;
    field.write_text(BufWriter::new(File::create(path)?))?;
    let area_error = (field.area() / TAU - 1.0).abs();
    let singular: Vec<Value> = field
        .singular_points
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("index".into(), json!([p.index.0, p.index.1]));
            m.insert("location".into(), complex(p.location));
            m.insert("vanishing_order".into(), json!(p.vanishing_order));
            Value::Object(m)
        })
        .collect();
    r.outputs.insert("path".into(), Value::String(path.display().to_string()));
    r.outputs.insert("area".into(), num(field.area()));
    r.outputs.insert("labels".into(), Value::String(field.labels.to_string()));
    r.outputs.insert("singular_points".into(), Value::Array(singular));
    r.residuals.insert("area".into(), residual(area_error, tol.get("area")));
    r.pass = area_error <= tol.get("area");
    Ok(r)
}
