//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs under `cargo test` with its own harness so the lines always print.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use conetorus::detformula::{
    b_minus_inf_closed, b_minus_inf_from_ab, conical_factor, det_prelim, det_value, variational_residual,
};
use conetorus::geometry::{
    branch_values_match, conformal_factor_on_torus, conformal_map_jet, gauss_curvature, metric_rho, CoveringMap,
    GridShape, BRANCH_MATCH_TOLERANCE, CURVATURE_STEP,
};
use conetorus::moduli::{g_orbit, sigma_from_t, t_from_sigma, ModulusPoint};
use conetorus::spectral::{
    assemble_for_modulus, lowest_eigenvalues, spectral_discrepancy, weyl_check, zeta_det_estimate, SpectrumResult,
};
use conetorus::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn annulus_point(rng: &mut ChaCha8Rng) -> ModulusPoint {
    loop {
        let r = (rng.gen_range(0.05f64.ln()..20f64.ln())).exp();
        let t = Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        let d = (t - 1.0).norm();
        if d > 0.05 && d < 20.0 && t.im != 0.0 {
            return ModulusPoint::new(t).unwrap();
        }
    }
}

fn f_symmetry() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let t = annulus_point(&mut rng);
        let v = t.value();
        let f = conical_factor(&t);
        let f_inv = conical_factor(&ModulusPoint::new(v.inv())?);
        let f_ref = conical_factor(&ModulusPoint::new(1.0 - v)?);
        worst = worst.max(((f_inv - f) / f).abs()).max(((f_ref - f) / f).abs());
    }
    Ok(Outcome {
        pass: worst < 1e-12,
        detail: format!("max relative deviation {worst:.3e} (limit 1e-12, 200 samples)"),
    })
}

fn orbit_invariance() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let t = annulus_point(&mut rng);
        let base = det_value(&t)?.log_value;
        for m in g_orbit(&t).members {
            worst = worst.max((det_value(&ModulusPoint::new(m)?)?.log_value - base).abs());
        }
    }
    Ok(Outcome { pass: worst < 1e-9, detail: format!("max log-det spread {worst:.3e} (limit 1e-9, 50 orbits)") })
}

fn round_trip() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut misses = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let t = annulus_point(&mut rng);
        let back = t_from_sigma(&sigma_from_t(&t)?)?.value();
        let orbit = g_orbit(&t);
        let d = orbit.members.iter().map(|m| (m - back).norm() / m.norm().max(1.0)).fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
        if !orbit.contains(back, 1e-9) {
            misses += 1;
        }
    }
    Ok(Outcome {
        pass: misses == 0,
        detail: format!("{misses} misses, max orbit distance {worst:.3e} (limit 1e-9, 50 samples)"),
    })
}

fn b_minus_infinity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let t = annulus_point(&mut rng);
        let a = b_minus_inf_closed(&t)?;
        let b = b_minus_inf_from_ab(&t)?;
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    Ok(Outcome { pass: worst < 1e-8, detail: format!("max discrepancy {worst:.3e} (limit 1e-8, 30 samples)") })
}

fn variational() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        worst = worst.max(variational_residual(&annulus_point(&mut rng))?);
    }
    Ok(Outcome { pass: worst < 1e-6, detail: format!("max residual {worst:.3e} (limit 1e-6, 20 samples)") })
}

fn prelim_consistency() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let diffs: Vec<f64> = (0..50)
        .map(|_| {
            let t = annulus_point(&mut rng);
            Ok(det_prelim(&t)?.log_value - det_value(&t)?.log_value)
        })
        .collect::<Result<_>>()?;
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64).sqrt();
    Ok(Outcome { pass: sd < 1e-8, detail: format!("std dev {sd:.3e}, mean {mean:.3e} (limit 1e-8, 50 samples)") })
}

fn curvature() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_k: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let w = Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if w.norm() < 0.2 || (w - 1.0).norm() < 0.2 || w.norm() > 10.0 {
            continue;
        }
        worst_k = worst_k.max((gauss_curvature(w, CURVATURE_STEP)? - 1.0).abs());
        n += 1;
    }
    let mut worst_p: f64 = 0.0;
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.gen_range(0.02..0.98), rng.gen_range(0.02..FRAC_PI_2 - 0.02));
        let [w, dw, _, _] = conformal_map_jet(z)?;
        let lhs = metric_rho(w)? * dw.norm_sqr();
        let rhs = 4.0 / (1.0 + z.norm_sqr()).powi(2);
        worst_p = worst_p.max((lhs - rhs).abs() / rhs);
    }
    Ok(Outcome {
        pass: worst_k < 1e-6 && worst_p < 1e-10,
        detail: format!("max |K-1| {worst_k:.3e} (limit 1e-6), pushforward {worst_p:.3e} (limit 1e-10)"),
    })
}

fn cover_geometry() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..20 {
        let map = CoveringMap::for_modulus(annulus_point(&mut rng))?;
        if !branch_values_match(&map, BRANCH_MATCH_TOLERANCE)? {
            mismatches += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for t in [Complex64::new(0.3, 0.0), Complex64::new(-0.6, 0.8), Complex64::new(2.5, 1.0)] {
        let t = ModulusPoint::new(t)?;
        let area = conformal_factor_on_torus(sigma_from_t(&t)?, t, GridShape::square(256))?.area();
        worst = worst.max((area / std::f64::consts::TAU - 1.0).abs());
    }
    Ok(Outcome {
        pass: mismatches == 0 && worst < 0.01,
        detail: format!(
            "{mismatches}/20 branch mismatches (tol 1e-8), max relative area error {worst:.2e} at 256² (limit 1e-2)"
        ),
    })
}

fn first_nonzero(spec: &SpectrumResult, count: usize) -> SpectrumResult {
    let mut out = spec.clone();
    out.eigenvalues.truncate(count + 1);
    out
}

fn spectral_cross_checks() -> Result<Outcome> {
    let shape = GridShape::square(256);
    let t = ModulusPoint::real(2.0)?;
    let partner = ModulusPoint::real(0.5)?;
    let a = lowest_eigenvalues(&assemble_for_modulus(t, shape)?, 60)?;
    let b = lowest_eigenvalues(&assemble_for_modulus(partner, shape)?, 60)?;
    let zero = a.diagnostics.zero_mode_residual.max(b.diagnostics.zero_mode_residual);
    let slope = weyl_check(&a)?;
    let gap = spectral_discrepancy(&first_nonzero(&a, 15), &first_nonzero(&b, 15));
    Ok(Outcome {
        pass: zero < 1e-8 && (slope - 0.5).abs() <= 0.05 && gap < 1e-2,
        detail: format!(
            "zero mode {zero:.2e} (limit 1e-8), Weyl slope {slope:.4} (0.5±0.05), t=2 vs 1/2 gap {gap:.2e} over 15 modes (limit 1e-2)"
        ),
    })
}

fn headline_ratio() -> Result<Outcome> {
    let shape = GridShape::square(256);
    let (t1, t2) = (ModulusPoint::real(0.3)?, ModulusPoint::real(0.7)?);
    let e1 = zeta_det_estimate(&lowest_eigenvalues(&assemble_for_modulus(t1, shape)?, 60)?)?;
    let e2 = zeta_det_estimate(&lowest_eigenvalues(&assemble_for_modulus(t2, shape)?, 60)?)?;
    let spectral = e1.difference(&e2);
    let formula = det_value(&t1)?.difference(&det_value(&t2)?);
    let gap = (spectral - formula).abs();
    Ok(Outcome {
        pass: gap < 0.1,
        detail: format!("spectral {spectral:.4e} vs formula {formula:.4e}, gap {gap:.3e} (limit 0.1)"),
    })
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("F-symmetry", Duration::from_secs(1), f_symmetry),
        ("orbit invariance of log det", Duration::from_secs(10), orbit_invariance),
        ("t -> sigma -> t round trip", Duration::from_secs(10), round_trip),
        ("b(-inf) two routes", Duration::from_secs(1), b_minus_infinity),
        ("variational identity", Duration::from_secs(30), variational),
        ("preliminary form consistency", Duration::from_secs(10), prelim_consistency),
        ("curvature and pushforward", Duration::from_secs(5), curvature),
        ("cover branch values and area", Duration::from_secs(30), cover_geometry),
        ("spectral cross-checks", Duration::from_secs(300), spectral_cross_checks),
        ("determinant ratio", Duration::from_secs(600), headline_ratio),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass && elapsed <= *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<30} {}  {detail}; {:.2}s (budget {}s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {}/10 passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
