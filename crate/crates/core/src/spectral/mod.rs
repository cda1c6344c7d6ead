//! Discrete spectrum of the cone-metric Laplacian on the flat torus chart.
//!
//! The surface is the flat torus `ℂ/(ℤ+σℤ)` with conformal factor `e^{2φ}`,
//! so the Laplacian is the generalized symmetric problem `K ψ = λ M ψ` with
//! `K` the flat Dirichlet form and `M = diag(e^{2φ}·cell area)`. The factor
//! vanishes to second order at the cone point and is kept as sampled: the
//! quadratic form is the plain Dirichlet form, which is what selects the
//! Friedrichs extension.

mod solver;
mod stencil;
mod zeta;

pub use solver::EigenOptions;
pub use stencil::PeriodicStencil;
pub use zeta::{zeta_det_estimate, ZETA_MIN_MODES};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{conformal_factor_on_torus, GridShape};
use crate::moduli::{sigma_from_t, Generator, ModulusPoint};
use crate::specialfn::PeriodRatio;

/// Smallest grid dimension accepted by [`assemble`].
pub const MIN_GRID: usize = 32;
/// Smallest eigenvalue count accepted by [`lowest_eigenvalues`].
pub const MIN_MODES: usize = 10;
/// Smallest eigenvalue count accepted by [`weyl_check`].
pub const WEYL_MIN_MODES: usize = 30;

/// Constant heat-trace coefficient `a₀` of the cone metric: the curvature
/// term `∫K dA/12π = 1/6` (the area is 2π and `K = 1`) plus the cone term
/// `(2π/β − β/2π)/12 = −1/8` at `β = 4π`.
pub const CONE_HEAT_INVARIANT: f64 = 1.0 / 24.0;

/// Stiffness stencil and lumped mass of one surface.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub sigma: PeriodRatio,
    pub t: Option<ModulusPoint>,
    pub stiffness: PeriodicStencil,
    /// Diagonal of `M`, row-major as in [`GridShape::index`].
    pub weight: Vec<f64>,
    /// Constant term `a₀` of the heat trace `Σ e^{−sλ} ∼ A/(4πs) + a₀`.
    pub heat_invariant: f64,
}

impl OperatorPair {
    pub fn shape(&self) -> GridShape {
        self.stiffness.shape()
    }

    /// Total mass, the discrete area.
    pub fn area(&self) -> f64 {
        self.weight.iter().sum()
    }

    /// Flat metric `|dz|²/Im σ`, scaled to unit area.
    pub fn flat_unit_area(sigma: PeriodRatio, shape: GridShape) -> Result<Self> {
        check_grid(shape)?;
        let stiffness = PeriodicStencil::dirichlet_form(&sigma, shape)?;
        let weight = vec![1.0 / shape.len() as f64; shape.len()];
        Ok(Self { sigma, t: None, stiffness, weight, heat_invariant: 0.0 })
    }
}

fn check_grid(shape: GridShape) -> Result<()> {
    if shape.n1 < MIN_GRID || shape.n2 < MIN_GRID {
        return Err(Error::Discretization(format!(
            "grid {}x{} is coarser than {MIN_GRID}x{MIN_GRID}",
            shape.n1, shape.n2
        )));
    }
    Ok(())
}

/// Stiffness and weight for the cone metric over `t` on the chart `σ`.
pub fn assemble(sigma: PeriodRatio, t: ModulusPoint, shape: GridShape) -> Result<OperatorPair> {
    check_grid(shape)?;
    let field = conformal_factor_on_torus(sigma, t, shape)?;
    let stiffness = PeriodicStencil::dirichlet_form(&sigma, shape)?;
    let cell = field.cell_area();
    let weight: Vec<f64> = field.values.iter().map(|v| v * cell).collect();
    if let Some(bad) = weight.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::Consistency(format!("negative or non-finite weight {bad}")));
    }
    Ok(OperatorPair { sigma, t: Some(t), stiffness, weight, heat_invariant: CONE_HEAT_INVARIANT })
}

/// Convenience: [`assemble`] on the chart `σ(t)`.
pub fn assemble_for_modulus(t: ModulusPoint, shape: GridShape) -> Result<OperatorPair> {
    assemble(sigma_from_t(&t)?, t, shape)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumDiagnostics {
    /// `λ₀/λ₁`.
    pub zero_mode_residual: f64,
    /// `max |K_ij − K_ji|`.
    pub symmetry_residual: f64,
    /// Largest Ritz residual relative to its Ritz value.
    pub ritz_residual: f64,
    pub basis_size: usize,
    pub block_steps: usize,
}

/// The `M` lowest eigenvalues, the first being the constant mode.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub grid: GridShape,
    /// `[Re σ, Im σ]`.
    pub sigma: [f64; 2],
    /// `[Re t, Im t]`, absent for flat tori.
    pub t: Option<[f64; 2]>,
    pub area: f64,
    pub heat_invariant: f64,
    pub seed: u64,
    pub diagnostics: SpectrumDiagnostics,
    /// Coarse grid of a Richardson pair, when the eigenvalues are extrapolated.
    #[serde(default)]
    pub extrapolated_from: Option<GridShape>,
}

impl SpectrumResult {
    pub fn nonzero(&self) -> &[f64] {
        &self.eigenvalues[1..]
    }
}

pub fn lowest_eigenvalues(pair: &OperatorPair, m: usize) -> Result<SpectrumResult> {
    lowest_eigenvalues_with(pair, m, &EigenOptions::default())
}

pub fn lowest_eigenvalues_with(pair: &OperatorPair, m: usize, opts: &EigenOptions) -> Result<SpectrumResult> {
    let shape = pair.shape();
    if m < MIN_MODES {
        return Err(Error::Domain(format!("need at least {MIN_MODES} eigenvalues, asked for {m}")));
    }
    if 10 * m > shape.len() {
        return Err(Error::Discretization(format!(
            "{m} eigenvalues exceed a tenth of the {} grid points",
            shape.len()
        )));
    }
    let symmetry_residual = pair.stiffness.symmetry_residual();
    if symmetry_residual != 0.0 {
        return Err(Error::Consistency(format!("stiffness is not symmetric ({symmetry_residual:e})")));
    }

    let out = solver::largest_of_compressed(&pair.stiffness, &pair.weight, m - 1, opts)?;
    let mut eigenvalues = Vec::with_capacity(m);
    let ones = vec![1.0; shape.len()];
    let lambda0 = pair.stiffness.energy(&ones) / pair.area();
    eigenvalues.push(lambda0.max(0.0));
    for theta in &out.thetas {
        if *theta <= 0.0 {
            return Err(Error::Consistency(format!("non-positive Ritz value {theta:e}")));
        }
        eigenvalues.push(1.0 / theta);
    }
    let zero_mode_residual = lambda0.abs() / eigenvalues[1];

    let s = pair.sigma.value();
    Ok(SpectrumResult {
        eigenvalues,
        grid: shape,
        sigma: [s.re, s.im],
        t: pair.t.map(|t| [t.value().re, t.value().im]),
        area: pair.area(),
        heat_invariant: pair.heat_invariant,
        seed: opts.seed,
        diagnostics: SpectrumDiagnostics {
            zero_mode_residual,
            symmetry_residual,
            ritz_residual: out.max_relative_residual,
            basis_size: out.basis_size,
            block_steps: out.block_steps,
        },
        extrapolated_from: None,
    })
}

/// Richardson step `(4λ_h − λ_{2h})/3` removing the `h²` term of the
/// discretization error, mode by mode in sorted order. `fine` must be the
/// same surface on a grid twice as dense in each direction.
///
/// The scheme is second order for the cone metric too: the pulled-back
/// eigenfunctions are smooth in the torus coordinate.
pub fn extrapolate_to_continuum(fine: &SpectrumResult, coarse: &SpectrumResult) -> Result<SpectrumResult> {
    if fine.grid.n1 != 2 * coarse.grid.n1 || fine.grid.n2 != 2 * coarse.grid.n2 {
        return Err(Error::Domain(format!(
            "grids {}x{} and {}x{} are not a refinement pair",
            fine.grid.n1, fine.grid.n2, coarse.grid.n1, coarse.grid.n2
        )));
    }
    if fine.sigma != coarse.sigma || fine.t != coarse.t || fine.heat_invariant != coarse.heat_invariant {
        return Err(Error::Domain("spectra belong to different surfaces".into()));
    }
    if fine.extrapolated_from.is_some() || coarse.extrapolated_from.is_some() {
        return Err(Error::Domain("spectra are already extrapolated".into()));
    }
    let m = fine.eigenvalues.len().min(coarse.eigenvalues.len());
    let mut eigenvalues = Vec::with_capacity(m);
    eigenvalues.push(fine.eigenvalues[0]);
    let mut rest: Vec<f64> = (1..m).map(|k| (4.0 * fine.eigenvalues[k] - coarse.eigenvalues[k]) / 3.0).collect();
    rest.sort_by(f64::total_cmp);
    eigenvalues.extend(rest);
    let mut out = fine.clone();
    out.eigenvalues = eigenvalues;
    out.extrapolated_from = Some(coarse.grid);
    Ok(out)
}

/// Least-squares slope of the counting function `N(λ_k) = k` against `λ_k`
/// over all nonzero computed eigenvalues, with a free intercept.
pub fn weyl_check(spec: &SpectrumResult) -> Result<f64> {
    if spec.eigenvalues.len() < WEYL_MIN_MODES {
        return Err(Error::Domain(format!(
            "Weyl fit needs {WEYL_MIN_MODES} eigenvalues, have {}",
            spec.eigenvalues.len()
        )));
    }
    let pts: Vec<(f64, f64)> = spec.nonzero().iter().enumerate().map(|(k, l)| (*l, k as f64 + 1.0)).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Singular("eigenvalues do not spread; slope undefined".into()));
    }
    Ok(sxy / sxx)
}

/// Largest relative gap between two spectra over their nonzero modes.
pub fn spectral_discrepancy(a: &SpectrumResult, b: &SpectrumResult) -> f64 {
    a.nonzero().iter().zip(b.nonzero()).map(|(x, y)| (x - y).abs() / x.abs().max(y.abs())).fold(0.0, f64::max)
}

/// Spectra of the surfaces over `t1` and `t2`, each on its own chart `σ(t)`,
/// compared mode by mode.
pub fn isospectral_check(t1: ModulusPoint, t2: ModulusPoint, shape: GridShape, m: usize) -> Result<f64> {
    let a = lowest_eigenvalues(&assemble_for_modulus(t1, shape)?, m)?;
    let b = lowest_eigenvalues(&assemble_for_modulus(t2, shape)?, m)?;
    Ok(spectral_discrepancy(&a, &b))
}

/// [`isospectral_check`] between `t` and `g·t`.
pub fn isospectral_orbit_check(t: ModulusPoint, g: Generator, shape: GridShape, m: usize) -> Result<f64> {
    isospectral_check(t, g.apply_point(&t)?, shape, m)
}

/// Flat-torus eigenvalues `4π²|n − mσ|²/Im σ` at unit area, ascending, `count` of them.
pub fn flat_spectrum(sigma: &PeriodRatio, count: usize) -> Vec<f64> {
    let s = sigma.value();
    let scale = 4.0 * std::f64::consts::PI.powi(2) / s.im;
    let mut out = Vec::new();
    let mut radius = 4i64;
    loop {
        out.clear();
        for m in -radius..=radius {
            for n in -radius..=radius {
                out.push(scale * (Complex64::new(n as f64, 0.0) - s * m as f64).norm_sqr());
            }
        }
        out.sort_by(f64::total_cmp);
        out.truncate(count);
        // |n − mσ|² ≥ q_min (m² + n²), with q_min the small eigenvalue of the form.
        let tr = s.norm_sqr() + 1.0;
        let q_min = 0.5 * (tr - (tr * tr - 4.0 * s.im * s.im).max(0.0).sqrt());
        if out.len() == count && out[count - 1] < scale * q_min * (radius * radius) as f64 {
            return out;
        }
        radius *= 2;
    }
}
