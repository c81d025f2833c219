//! Sampled Wiener amalgam norms `W(C, ℓ^q_{v_s})` on `R²`.
//!
//! A field is sampled on `x = −R + i/M`, `i = 0..=2RM`, in both axes. The
//! cell `λ + [0, 1]²` with `λ ∈ Z² ∩ [−R, R)²` contributes its grid maximum,
//! and the norm is `(Σ_λ max_cell^q v_s(λ)^q)^{1/q}`. Cells share their
//! boundary rows, so a sup over the closed cell is approximated from below.

use std::io::Read;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::seq_algebra::QParams;

/// Samples of a field on the box `[−R, R]²`, `M` points per unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    extent: usize,
    per_cell: usize,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(extent: usize, per_cell: usize, values: Vec<Complex64>) -> Result<Self> {
        if extent == 0 {
            return Err(Error::InvalidParams("extent must be positive".into()));
        }
        if per_cell < 4 {
            return Err(Error::InvalidParams(format!("need at least 4 samples per cell, got {per_cell}")));
        }
        let side = 2 * extent * per_cell + 1;
        if values.len() != side * side {
            return Err(Error::DimensionMismatch { expected: side * side, found: values.len() });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("samples must be finite".into()));
        }
        Ok(Self { extent, per_cell, values })
    }

    /// Samples `f(x, y)` on the grid.
    pub fn from_fn<F>(extent: usize, per_cell: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let side = 2 * extent * per_cell + 1;
        let step = 1.0 / per_cell as f64;
        let lo = -(extent as f64);
        let values = (0..side * side)
            .into_par_iter()
            .map(|i| f(lo + (i / side) as f64 * step, lo + (i % side) as f64 * step))
            .collect();
        Self::new(extent, per_cell, values)
    }

    pub fn zeros(extent: usize, per_cell: usize) -> Result<Self> {
        let side = 2 * extent * per_cell + 1;
        Self::new(extent, per_cell, vec![Complex64::new(0.0, 0.0); side * side])
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn per_cell(&self) -> usize {
        self.per_cell
    }

    /// Samples per axis, `2RM + 1`.
    pub fn side(&self) -> usize {
        2 * self.extent * self.per_cell + 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -(self.extent as f64) + i as f64 / self.per_cell as f64
    }

    pub fn abs(&self) -> Self {
        Self {
            values: self.values.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
            ..self.clone()
        }
    }

    /// Largest modulus on the outer boundary of the box; a proxy for the
    /// truncated tail.
    pub fn boundary_max(&self) -> f64 {
        let side = self.side();
        let mut m = 0.0f64;
        for i in 0..side {
            for j in [0, side - 1] {
                m = m.max(self.values[i * side + j].norm()).max(self.values[j * side + i].norm());
            }
        }
        m
    }

    /// Bilinear interpolation, zero outside the box.
    pub fn interpolate(&self, x: f64, y: f64) -> Complex64 {
        let side = self.side();
        let r = self.extent as f64;
        if !(x >= -r && x <= r && y >= -r && y <= r) {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.per_cell as f64;
        let (u, v) = ((x + r) * m, (y + r) * m);
        let (i, j) = ((u.floor() as usize).min(side - 2), (v.floor() as usize).min(side - 2));
        let (tu, tv) = (u - i as f64, v - j as f64);
        let at = |a: usize, b: usize| self.values[a * side + b];
        at(i, j) * (1.0 - tu) * (1.0 - tv)
            + at(i + 1, j) * tu * (1.0 - tv)
            + at(i, j + 1) * (1.0 - tu) * tv
            + at(i + 1, j + 1) * tu * tv
    }

    /// Reads `x,y,value` rows (header required) forming a full square grid.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() < 3 {
                return Err(Error::Parse(format!("expected x,y,value, got {} fields", rec.len())));
            }
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            rows.push((parse(&rec[0])?, parse(&rec[1])?, parse(&rec[2])?));
        }
        if rows.len() < 2 {
            return Err(Error::GridMismatch("too few samples".into()));
        }
        let r = rows.iter().fold(0.0f64, |m, &(x, y, _)| m.max(x.abs()).max(y.abs()));
        let mut xs: Vec<f64> = rows.iter().map(|t| t.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        if xs.len() < 2 {
            return Err(Error::GridMismatch("grid has a single column".into()));
        }
        let m = ((xs.len() - 1) as f64 / (2.0 * r)).round() as usize;
        let extent = r.round() as usize;
        if m == 0 || extent == 0 || (r - extent as f64).abs() > 1e-9 {
            return Err(Error::GridMismatch(format!("box half-width {r} is not a positive integer")));
        }
        let side = 2 * extent * m + 1;
        if rows.len() != side * side {
            return Err(Error::GridMismatch(format!("expected {} samples, found {}", side * side, rows.len())));
        }
        let mut values = vec![Complex64::new(f64::NAN, 0.0); side * side];
        for (x, y, v) in rows {
            let i = ((x + r) * m as f64).round();
            let j = ((y + r) * m as f64).round();
            if (i / m as f64 - (x + r)).abs() > 1e-6 || (j / m as f64 - (y + r)).abs() > 1e-6 {
                return Err(Error::GridMismatch(format!("point ({x}, {y}) is off the grid")));
            }
            values[i as usize * side + j as usize] = Complex64::new(v, 0.0);
        }
        Self::new(extent, m, values)
    }
}

/// `|λ|`-weighted cell maxima summed in `ℓ^q`.
pub fn amalgam_norm(field: &SampledField, p: &QParams) -> f64 {
    let sum: f64 = cell_maxima(field)
        .into_iter()
        .map(|((a, b), m)| (m * p.weight(&[a, b])).powf(p.q()))
        .sum();
    if sum == 0.0 {
        0.0
    } else {
        sum.powf(1.0 / p.q())
    }
}

/// Grid maximum of `|F|` on each closed cell, keyed by its lower-left corner.
pub fn cell_maxima(field: &SampledField) -> Vec<((i64, i64), f64)> {
    let r = field.extent;
    let m = field.per_cell;
    let side = field.side();
    (0..4 * r * r)
        .into_par_iter()
        .map(|c| {
            let (cx, cy) = (c / (2 * r), c % (2 * r));
            let mut best = 0.0f64;
            for i in cx * m..=cx * m + m {
                for j in cy * m..=cy * m + m {
                    best = best.max(field.values[i * side + j].norm());
                }
            }
            ((cx as i64 - r as i64, cy as i64 - r as i64), best)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinedNorm {
    pub coarse: f64,
    pub fine: f64,
    /// `|fine − coarse| / 3`, the second-order extrapolation error.
    pub richardson: f64,
    pub extrapolated: f64,
}

/// Norm of `f` at `M` and `2M` samples per cell.
pub fn refined_norm<F>(f: F, extent: usize, per_cell: usize, p: &QParams) -> Result<RefinedNorm>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let coarse = amalgam_norm(&SampledField::from_fn(extent, per_cell, &f)?, p);
    let fine = amalgam_norm(&SampledField::from_fn(extent, 2 * per_cell, &f)?, p);
    Ok(RefinedNorm {
        coarse,
        fine,
        richardson: (fine - coarse).abs() / 3.0,
        extrapolated: fine + (fine - coarse) / 3.0,
    })
}

/// Riemann-sum convolution on the union box `[−(R_F + R_G), R_F + R_G]²`.
pub fn convolve(f: &SampledField, g: &SampledField) -> Result<SampledField> {
    if f.per_cell != g.per_cell {
        return Err(Error::GridMismatch(format!(
            "samples per cell differ: {} vs {}",
            f.per_cell, g.per_cell
        )));
    }
    let (sf, sg) = (f.side(), g.side());
    let side = sf + sg - 1;
    let pad = |src: &SampledField, s: usize| {
        let mut buf = vec![Complex64::new(0.0, 0.0); side * side];
        for i in 0..s {
            buf[i * side..i * side + s].copy_from_slice(&src.values[i * s..(i + 1) * s]);
        }
        buf
    };
    let mut a = pad(f, sf);
    let mut b = pad(g, sg);
    fft::forward_2d(&mut a, side, side);
    fft::forward_2d(&mut b, side, side);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft::inverse_2d(&mut a, side, side);
    let h = 1.0 / f.per_cell as f64;
    let scale = h * h / (side * side) as f64;
    for v in &mut a {
        *v *= scale;
    }
    SampledField::new(f.extent + g.extent, f.per_cell, a)
}

/// `‖F ∗ G‖ / (‖F‖ ‖G‖)`, zero when either factor vanishes.
pub fn conv_embedding_check(f: &SampledField, g: &SampledField, p: &QParams) -> Result<f64> {
    let conv = convolve(f, g)?;
    let denom = amalgam_norm(f, p) * amalgam_norm(g, p);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(amalgam_norm(&conv, p) / denom)
}

pub type Mat2 = [[f64; 2]; 2];

fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn apply2(m: &Mat2, x: f64, y: f64) -> (f64, f64) {
    (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
}

/// Convex polygons overlap in a set of positive area.
fn polygons_overlap(p: &[(f64, f64)], q: &[(f64, f64)]) -> bool {
    const EPS: f64 = 1e-12;
    for poly in [p, q] {
        for i in 0..poly.len() {
            let (x0, y0) = poly[i];
            let (x1, y1) = poly[(i + 1) % poly.len()];
            let axis = (y0 - y1, x1 - x0);
            let proj = |pts: &[(f64, f64)]| {
                pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
                    let d = x * axis.0 + y * axis.1;
                    (lo.min(d), hi.max(d))
                })
            };
            let (a0, a1) = proj(p);
            let (b0, b1) = proj(q);
            let len = (axis.0 * axis.0 + axis.1 * axis.1).sqrt();
            if a1.min(b1) - a0.max(b0) <= EPS * len {
                return false;
            }
        }
    }
    true
}

/// Number of unit cells meeting `M(λ + [0, 1]²)` in positive area.
pub fn covering_count(m: &Mat2, lam: (i64, i64)) -> usize {
    let (a, b) = (lam.0 as f64, lam.1 as f64);
    let poly: Vec<(f64, f64)> =
        [(a, b), (a + 1.0, b), (a + 1.0, b + 1.0), (a, b + 1.0)].iter().map(|&(x, y)| apply2(m, x, y)).collect();
    let (x0, x1) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let (y0, y1) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let mut count = 0;
    for i in x0.floor() as i64..=x1.ceil() as i64 {
        for j in y0.floor() as i64..=y1.ceil() as i64 {
            let (u, v) = (i as f64, j as f64);
            let cell = [(u, v), (u + 1.0, v), (u + 1.0, v + 1.0), (u, v + 1.0)];
            if polygons_overlap(&poly, &cell) {
                count += 1;
            }
        }
    }
    count
}

/// Largest covering count over the cells of `[−R, R)²`.
pub fn covering_multiplicity(m: &Mat2, extent: usize) -> usize {
    let r = extent as i64;
    (-r..r).flat_map(|a| (-r..r).map(move |b| (a, b))).map(|lam| covering_count(m, lam)).max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlInvariance {
    /// `‖F ∘ M‖ / ‖F‖`.
    pub ratio: f64,
    pub beta: usize,
    /// `4 |det A| β` with `A = I`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares the amalgam norm of `F ∘ M` with that of `F`, both sampled on
/// the same grid, against the covering bound `ratio^q ≤ 4 β`.
pub fn gl_invariance_check<F>(f: F, mat: &Mat2, extent: usize, per_cell: usize, p: &QParams) -> Result<GlInvariance>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let det = det2(mat);
    if !det.is_finite() || det.abs() < 1e-12 {
        return Err(Error::SingularMatrix);
    }
    let base = amalgam_norm(&SampledField::from_fn(extent, per_cell, &f)?, p);
    let moved = amalgam_norm(
        &SampledField::from_fn(extent, per_cell, |x, y| {
            let (u, v) = apply2(mat, x, y);
            f(u, v)
        })?,
        p,
    );
    let ratio = if base == 0.0 { 0.0 } else { moved / base };
    let beta = covering_multiplicity(mat, extent);
    let bound = 4.0 * beta as f64;
    Ok(GlInvariance { ratio, beta, bound, holds: ratio.powf(p.q()) <= bound * (1.0 + 1e-12) })
}

/// Named test fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPreset {
    /// `exp(−π |z|²)`.
    Gaussian,
    /// Smooth bump of height 1 supported in the disc of radius 0.4 about `(0.5, 0.5)`.
    Bump,
    /// `exp(−π |z|²) e^{πi (x² − y²)}`.
    ChirpedGaussian,
}

impl FieldPreset {
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        use std::f64::consts::PI;
        match self {
            FieldPreset::Gaussian => Complex64::new((-PI * (x * x + y * y)).exp(), 0.0),
            FieldPreset::Bump => {
                let r2 = ((x - 0.5).powi(2) + (y - 0.5).powi(2)) / 0.16;
                if r2 < 1.0 {
                    Complex64::new((1.0 - 1.0 / (1.0 - r2)).exp(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            FieldPreset::ChirpedGaussian => {
                Complex64::from_polar((-PI * (x * x + y * y)).exp(), PI * (x * x - y * y))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldPreset::Gaussian => "gaussian",
            FieldPreset::Bump => "bump",
            FieldPreset::ChirpedGaussian => "chirped-gaussian",
        }
    }
}

impl FromStr for FieldPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(FieldPreset::Gaussian),
            "bump" => Ok(FieldPreset::Bump),
            "chirped-gaussian" => Ok(FieldPreset::ChirpedGaussian),
            other => Err(Error::Parse(format!("unknown field preset {other:?}"))),
        }
    }
}
