use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::cover::{CoveringMap, HalfPeriod, HalfPeriodLabels};
use crate::error::{Error, Result};
use crate::moduli::ModulusPoint;
use crate::specialfn::PeriodRatio;

const FORMAT_TAG: &str = "# conetorus conformal-field v1";

/// Grid dimensions: `n1` samples along the real period, `n2` along σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GridShape {
    pub n1: usize,
    pub n2: usize,
}

impl GridShape {
    pub fn square(n: usize) -> Self {
        Self { n1: n, n2: n }
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major flat index, rows running along σ.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    /// Lattice coordinates `(p, q)` of sample `(i, j)`; the parallelogram is
    /// centred on the origin and sampled at half-cell offsets, so no sample
    /// lands on a half period when both dimensions are even.
    #[inline]
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 0.5) / self.n1 as f64 - 0.5, (j as f64 + 0.5) / self.n2 as f64 - 0.5)
    }

    fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 || !self.n1.is_multiple_of(2) || !self.n2.is_multiple_of(2) {
            return Err(Error::Discretization(format!(
                "grid {}x{} must have even dimensions of at least 2",
                self.n1, self.n2
            )));
        }
        Ok(())
    }
}

/// Annotated zero of the conformal factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    /// Nearest sample.
    pub index: (usize, usize),
    pub location: Complex64,
    pub vanishing_order: u32,
}

/// Samples of `e^{2φ}` for the pulled-back metric over the fundamental parallelogram.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalField {
    pub sigma: PeriodRatio,
    pub t: ModulusPoint,
    pub shape: GridShape,
    pub labels: HalfPeriodLabels,
    /// Row-major, `values[shape.index(i, j)]`.
    pub values: Vec<f64>,
    pub singular_points: Vec<SingularPoint>,
}

impl ConformalField {
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let (p, q) = self.shape.coords(i, j);
        Complex64::new(p, 0.0) + self.sigma.value() * q
    }

    /// Flat area of one grid cell.
    pub fn cell_area(&self) -> f64 {
        self.sigma.im() / self.shape.len() as f64
    }

    /// Midpoint-rule area of the metric.
    pub fn area(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    /// Plain-text grid file; see `docs/formats.md`.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let s = self.sigma.value();
        let t = self.t.value();
        writeln!(out, "{FORMAT_TAG}")?;
        writeln!(out, "sigma {:.17e} {:.17e}", s.re, s.im)?;
        writeln!(out, "t {:.17e} {:.17e}", t.re, t.im)?;
        writeln!(out, "shape {} {}", self.shape.n1, self.shape.n2)?;
        writeln!(out, "labels {}", self.labels)?;
        for sp in &self.singular_points {
            writeln!(
                out,
                "singular {} {} {:.17e} {:.17e} {}",
                sp.index.0, sp.index.1, sp.location.re, sp.location.im, sp.vanishing_order
            )?;
        }
        writeln!(out, "values")?;
        for row in self.values.chunks(self.shape.n1) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| Error::Parse("unexpected end of field file".into()))?.map_err(Error::from)
        };
        if next()?.trim() != FORMAT_TAG {
            return Err(Error::Parse("missing conformal-field header".into()));
        }
        let complex = |line: &str, key: &str| -> Result<Complex64> {
            let rest =
                line.strip_prefix(key).ok_or_else(|| Error::Parse(format!("expected `{key}` line, got `{line}`")))?;
            let parts: Vec<f64> = rest.split_whitespace().map(parse_f64).collect::<Result<_>>()?;
            match parts[..] {
                [re, im] => Ok(Complex64::new(re, im)),
                _ => Err(Error::Parse(format!("bad `{key}` line"))),
            }
        };
        let sigma = PeriodRatio::new(complex(&next()?, "sigma")?)?;
        let t = ModulusPoint::new(complex(&next()?, "t")?)?;
        let shape_line = next()?;
        let dims: Vec<usize> = shape_line
            .strip_prefix("shape")
            .ok_or_else(|| Error::Parse("expected `shape` line".into()))?
            .split_whitespace()
            .map(|v| v.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        let shape = match dims[..] {
            [n1, n2] => GridShape { n1, n2 },
            _ => return Err(Error::Parse("bad `shape` line".into())),
        };
        let labels = parse_labels(&next()?)?;

        let mut singular_points = Vec::new();
        let mut line = next()?;
        while let Some(rest) = line.strip_prefix("singular") {
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::Parse("bad `singular` line".into()));
            }
            let idx = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(e.to_string()));
            singular_points.push(SingularPoint {
                index: (idx(f[0])?, idx(f[1])?),
                location: Complex64::new(parse_f64(f[2])?, parse_f64(f[3])?),
                vanishing_order: f[4].parse().map_err(|_| Error::Parse("bad vanishing order".into()))?,
            });
            line = next()?;
        }
        if line.trim() != "values" {
            return Err(Error::Parse(format!("expected `values`, got `{line}`")));
        }
        let mut values = Vec::with_capacity(shape.len());
        for _ in 0..shape.n2 {
            let row = next()?;
            let before = values.len();
            for v in row.split_whitespace() {
                values.push(parse_f64(v)?);
            }
            if values.len() - before != shape.n1 {
                return Err(Error::Parse("row length does not match shape".into()));
            }
        }
        Ok(Self { sigma, t, shape, labels, values, singular_points })
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

fn parse_labels(line: &str) -> Result<HalfPeriodLabels> {
    let rest = line.strip_prefix("labels").ok_or_else(|| Error::Parse("expected `labels` line".into()))?;
    let mut zero = None;
    let mut one = None;
    let mut branch = None;
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad label `{kv}`")))?;
        let h = HalfPeriod::from_name(v).ok_or_else(|| Error::Parse(format!("unknown half period `{v}`")))?;
        match k {
            "zero" => zero = Some(h),
            "one" => one = Some(h),
            "branch" => branch = Some(h),
            _ => return Err(Error::Parse(format!("unknown label `{k}`"))),
        }
    }
    match (zero, one, branch) {
        (Some(zero), Some(one), Some(branch)) => Ok(HalfPeriodLabels { zero, one, branch }),
        _ => Err(Error::Parse("incomplete labels".into())),
    }
}

/// Sample closest to `z` in the flat metric, modulo the lattice.
fn nearest_sample(shape: GridShape, s: Complex64, z: Complex64) -> (usize, usize) {
    let qc = z.im / s.im;
    let pc = z.re - s.re * qc;
    let base = |c: f64, n: usize| ((c + 0.5) * n as f64 - 0.5).floor() as isize;
    let (bi, bj) = (base(pc, shape.n1), base(qc, shape.n2));
    let mut best = (f64::INFINITY, (0, 0));
    for di in 0..2 {
        for dj in 0..2 {
            let (i, j) = (bi + di, bj + dj);
            let p = (i as f64 + 0.5) / shape.n1 as f64 - 0.5;
            let q = (j as f64 + 0.5) / shape.n2 as f64 - 0.5;
            let (dp, dq) = (p - pc, q - qc);
            let d = (Complex64::new(dp - dp.round(), 0.0) + s * (dq - dq.round())).norm();
            if d < best.0 {
                let wrap = |k: isize, n: usize| k.rem_euclid(n as isize) as usize;
                best = (d, (wrap(i, shape.n1), wrap(j, shape.n2)));
            }
        }
    }
    best.1
}

/// Samples `e^{2φ} = ρ(μ(z)) |μ'(z)|²` on a half-cell-offset grid.
///
/// The factor extends smoothly over the preimages of `0`, `1`, `∞`, and
/// vanishes to second order at the preimage of `t`, which is annotated.
pub fn conformal_factor_on_torus(sigma: PeriodRatio, t: ModulusPoint, shape: GridShape) -> Result<ConformalField> {
    shape.validate()?;
    let map = CoveringMap::new(sigma, t)?;
    let mut values = Vec::with_capacity(shape.len());
    let s = sigma.value();
    for j in 0..shape.n2 {
        for i in 0..shape.n1 {
            let (p, q) = shape.coords(i, j);
            values.push(map.conformal_factor(Complex64::new(p, 0.0) + s * q)?);
        }
    }

    let cone = map.cone_point();
    let singular_points =
        vec![SingularPoint { index: nearest_sample(shape, s, cone), location: cone, vanishing_order: 2 }];

    Ok(ConformalField { sigma, t, shape, labels: map.labels(), values, singular_points })
}
