//! Invariant suites behind `verify --suite`. Samples come from fixed seeds,
//! so reruns give identical reports.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use clap::ValueEnum;
use conetorus::detformula::{
    b_minus_inf_closed, b_minus_inf_from_ab, conical_factor, det_prelim, det_value, variational_residual,
};
use conetorus::geometry::{
    conformal_factor_on_torus, conformal_map_jet, gauss_curvature, metric_rho, CoveringMap, GridShape, CURVATURE_STEP,
};
use conetorus::moduli::{g_orbit, sigma_from_t, t_from_sigma, Generator, ModulusPoint};
use conetorus::spectral::{assemble, assemble_for_modulus, lowest_eigenvalues, spectral_discrepancy, weyl_check};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::record_surface;
use crate::report::{complex, num, Report};
use crate::tolerances::Tolerances;
use crate::{Failure, Suite, Surface};

/// Modes compared between orbit partners in the spectral suite.
const ISOSPECTRAL_MODES: usize = 15;

struct Check {
    group: &'static str,
    sample: Value,
    residual: f64,
    tolerance: f64,
}

#[derive(Default)]
struct Ledger(Vec<Check>);

impl Ledger {
    fn push(&mut self, group: &'static str, sample: Value, residual: f64, tolerance: f64) {
        self.0.push(Check { group, sample, residual, tolerance });
    }

    fn into_report(self, mut r: Report) -> Report {
        // NaN residuals fail.
        let ok = |c: &Check| c.residual <= c.tolerance;
        let passed = self.0.iter().filter(|c| ok(c)).count();
        let mut groups: BTreeMap<&str, (f64, f64, usize, usize)> = BTreeMap::new();
        for c in &self.0 {
            let g = groups.entry(c.group).or_insert((0.0, c.tolerance, 0, 0));
            g.0 = if c.residual.is_nan() { f64::NAN } else { g.0.max(c.residual) };
            g.2 += 1;
            g.3 += ok(c) as usize;
        }
        for (name, (max, tolerance, total, good)) in groups {
            r.residuals.insert(
                name.into(),
                json!({ "max": num(max), "tolerance": num(tolerance), "checks": total, "passed": good }),
            );
        }
        let checks = self
            .0
            .iter()
            .map(|c| json!({ "group": c.group, "sample": c.sample, "residual": num(c.residual), "pass": ok(c) }))
            .collect();
        r.outputs.insert("passed".into(), json!(passed));
        r.outputs.insert("total".into(), json!(self.0.len()));
        r.outputs.insert("checks".into(), Value::Array(checks));
        r.pass = passed == self.0.len();
        r
    }
}

/// Log-uniform in `0.05 < |t|, |t−1| < 20`, off the real axis.
fn annulus_point(rng: &mut ChaCha8Rng) -> ModulusPoint {
    loop {
        let r = rng.gen_range(0.05f64.ln()..20f64.ln()).exp();
        let t = Complex64::from_polar(r, rng.gen_range(-PI..PI));
        let d = (t - 1.0).norm();
        if d > 0.05 && d < 20.0 && t.im != 0.0 {
            return ModulusPoint::new(t).expect("sample avoids 0 and 1");
        }
    }
}

pub fn run(suite: Suite, surface: &Surface, n: usize, modes: usize, tol: &Tolerances) -> Result<Report, Failure> {
    let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut r = Report::new("verify");
    r.inputs.insert("suite".into(), Value::String(name));
    let mut ledger = Ledger::default();
    match suite {
        Suite::Symmetry => symmetry(&mut ledger, tol)?,
        Suite::Roundtrip => roundtrip(&mut ledger, tol)?,
        Suite::Variational => variational(&mut ledger, tol)?,
        Suite::Curvature => {
            r.inputs.insert("grid".into(), json!(n));
            curvature(&mut ledger, n, tol)?
        }
        Suite::Spectral => {
            record_surface(&mut r, surface);
            r.inputs.insert("grid".into(), json!(n));
            r.inputs.insert("modes".into(), json!(modes));
            spectral(&mut ledger, surface, n, modes, tol)?
        }
    }
    Ok(ledger.into_report(r))
}

fn symmetry(ledger: &mut Ledger, tol: &Tolerances) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let t = annulus_point(&mut rng);
        let v = t.value();
        let f = conical_factor(&t);
        let f_inv = conical_factor(&ModulusPoint::new(v.inv())?);
        let f_ref = conical_factor(&ModulusPoint::new(1.0 - v)?);
        let dev = ((f_inv - f) / f).abs().max(((f_ref - f) / f).abs());
        ledger.push("conical_factor_symmetry", complex(v), dev, tol.get("symmetry"));
    }
    Ok(())
}

fn roundtrip(ledger: &mut Ledger, tol: &Tolerances) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let t = annulus_point(&mut rng);
        let back = t_from_sigma(&sigma_from_t(&t)?)?.value();
        let d = g_orbit(&t).members.iter().map(|m| (m - back).norm() / m.norm().max(1.0)).fold(f64::INFINITY, f64::min);
        ledger.push("t_sigma_t", complex(t.value()), d, tol.get("roundtrip"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let t = annulus_point(&mut rng);
        let base = det_value(&t)?.log_value;
        let mut spread: f64 = 0.0;
        for m in g_orbit(&t).members {
            spread = spread.max((det_value(&ModulusPoint::new(m)?)?.log_value - base).abs());
        }
        ledger.push("det_orbit_invariance", complex(t.value()), spread, tol.get("orbit"));
    }
    Ok(())
}

fn variational(ledger: &mut Ledger, tol: &Tolerances) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let t = annulus_point(&mut rng);
        ledger.push("variational_identity", complex(t.value()), variational_residual(&t)?, tol.get("variational"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let t = annulus_point(&mut rng);
        let a = b_minus_inf_closed(&t)?;
        let d = (a - b_minus_inf_from_ab(&t)?).norm() / a.norm().max(1.0);
        ledger.push("b_minus_inf", complex(t.value()), d, tol.get("b_minus_inf"));
    }
    // The two determinant forms differ by a constant: their spread must vanish.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut diffs = Vec::with_capacity(50);
    for _ in 0..50 {
        let t = annulus_point(&mut rng);
        diffs.push(det_prelim(&t)?.log_value - det_value(&t)?.log_value);
    }
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64).sqrt();
    ledger.push("prelim_offset_spread", json!({ "samples": 50, "mean_offset": num(mean) }), sd, tol.get("prelim"));
    Ok(())
}

fn curvature(ledger: &mut Ledger, n: usize, tol: &Tolerances) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    while count < 100 {
        let w = Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if w.norm() < 0.2 || (w - 1.0).norm() < 0.2 || w.norm() > 10.0 {
            continue;
        }
        ledger.push(
            "gauss_curvature",
            complex(w),
            (gauss_curvature(w, CURVATURE_STEP)? - 1.0).abs(),
            tol.get("curvature"),
        );
        count += 1;
    }
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.gen_range(0.02..0.98), rng.gen_range(0.02..FRAC_PI_2 - 0.02));
        let [w, dw, _, _] = conformal_map_jet(z)?;
        let lhs = metric_rho(w)? * dw.norm_sqr();
        let rhs = 4.0 / (1.0 + z.norm_sqr()).powi(2);
        ledger.push("pushforward", complex(z), (lhs - rhs).abs() / rhs, tol.get("pushforward"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let t = annulus_point(&mut rng);
        let map = CoveringMap::for_modulus(t)?;
        // Same measure as `same_moduli_point`: distance to the nearest orbit member.
        let back = map.recovered_t();
        let gap =
            g_orbit(&t).members.iter().map(|m| (m - back).norm() / back.norm().max(1.0)).fold(f64::INFINITY, f64::min);
        ledger.push("branch_values", complex(t.value()), gap, tol.get("branch"));
    }
    for t in [Complex64::new(0.3, 0.0), Complex64::new(-0.6, 0.8), Complex64::new(2.5, 1.0)] {
        let t = ModulusPoint::new(t)?;
        let area = conformal_factor_on_torus(sigma_from_t(&t)?, t, GridShape::square(n))?.area();
        ledger.push("area", complex(t.value()), (area / TAU - 1.0).abs(), tol.get("area"));
    }
    Ok(())
}

fn spectral(ledger: &mut Ledger, s: &Surface, n: usize, modes: usize, tol: &Tolerances) -> Result<(), Failure> {
    if modes <= ISOSPECTRAL_MODES {
        return Err(Failure::Usage(format!("the spectral suite needs more than {ISOSPECTRAL_MODES} modes")));
    }
    let shape = GridShape::square(n);
    let spec = lowest_eigenvalues(&assemble(s.sigma, s.t, shape)?, modes)?;
    let partner = Generator::Invert.apply_point(&s.t)?;
    let other = lowest_eigenvalues(&assemble_for_modulus(partner, shape)?, modes)?;
    let sample = complex(s.t.value());
    ledger.push("zero_mode", sample.clone(), spec.diagnostics.zero_mode_residual, tol.get("zero_mode"));
    ledger.push("zero_mode", complex(partner.value()), other.diagnostics.zero_mode_residual, tol.get("zero_mode"));
    let expected = spec.area / (4.0 * PI);
    ledger.push("weyl_slope", sample.clone(), (weyl_check(&spec)? / expected - 1.0).abs(), tol.get("weyl"));
    let head = |x: &conetorus::spectral::SpectrumResult| {
        let mut x = x.clone();
        x.eigenvalues.truncate(ISOSPECTRAL_MODES + 1);
        x
    };
    ledger.push(
        "isospectral_inverse",
        sample,
        spectral_discrepancy(&head(&spec), &head(&other)),
        tol.get("isospectral"),
    );
    Ok(())
}
