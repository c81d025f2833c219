//! Matrices on `Λ = Z_N × Z_N` with off-diagonal decay measured in
//! `ℓ^q_{v_s}`.
//!
//! The diagonal envelope of `A` is `d_A(μ) = sup_λ |a_{λ, λ−μ}|` (indices mod
//! `N` per coordinate) and the class quasi-norm is `‖d_A‖_{ℓ^q_{v_s}}`, with
//! the weight evaluated on the centered representative of `μ`.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{LatticeField, LatticePoint};
use crate::seq_algebra::QParams;
use crate::stats;

/// Nonnegative field on `Z_N × Z_N`, row-major in residues `(k, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    n: usize,
    values: Vec<f64>,
}

impl DecayProfile {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: values.len() });
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidParams("decay profile entries must be >= 0".into()));
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n] }
    }

    /// Unit mass at the origin.
    pub fn delta(n: usize) -> Self {
        let mut d = Self::zeros(n);
        d.values[0] = 1.0;
        d
    }

    pub fn from_fn<F: Fn(LatticePoint) -> f64>(n: usize, f: F) -> Self {
        Self { n, values: LatticePoint::all(n).map(f).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, mu: LatticePoint) -> f64 {
        self.values[mu.index()]
    }

    /// Value at the point with centered coordinates `(a, b)`.
    pub fn at_centered(&self, a: i64, b: i64) -> f64 {
        self.at(LatticePoint::new(a, b, self.n))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `(Σ_μ h(μ)^q v_s(μ)^q)^{1/q}` over centered `μ`.
    pub fn qnorm(&self, p: &QParams) -> f64 {
        let sum = self.weighted_mass(p, |_| true);
        if sum == 0.0 {
            0.0
        } else {
            sum.powf(1.0 / p.q())
        }
    }

    /// `Σ h^q v_s^q` restricted to points accepted by `keep`.
    pub fn weighted_mass<F: Fn(LatticePoint) -> bool>(&self, p: &QParams, keep: F) -> f64 {
        LatticePoint::all(self.n)
            .filter(|&mu| keep(mu))
            .map(|mu| {
                let (a, b) = mu.centered();
                (self.values[mu.index()] * p.weight(&[a, b])).powf(p.q())
            })
            .sum()
    }

    /// Cyclic convolution on `Z_N × Z_N`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        Ok(Self::from_fn(n, |mu| {
            LatticePoint::all(n).map(|nu| self.at(nu) * other.at(mu.sub(&nu))).sum()
        }))
    }

    /// `μ ↦ h(−μ)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(self.n, |mu| self.at(mu.neg()))
    }

    /// Least-squares `α` in `max_{⌊|μ|⌋ = r} h(μ) ≈ C (1 + r)^{-α}`; `None`
    /// when fewer than two shells carry mass.
    pub fn decay_exponent(&self) -> Option<f64> {
        let radius = self.n / 2;
        let mut shells = vec![0.0f64; 2 * radius + 2];
        for mu in LatticePoint::all(self.n) {
            let r = mu.centered_norm().floor() as usize;
            shells[r] = shells[r].max(self.at(mu));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = shells
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(r, &m)| ((1.0 + r as f64).ln(), m.ln()))
            .unzip();
        stats::slope(&xs, &ys).map(|s| -s)
    }

    /// Rows `(mu_k, mu_l, value)` over centered coordinates, `mu_k` outer.
    pub fn centered_rows(&self) -> Vec<(i64, i64, f64)> {
        let n = self.n as i64;
        let lo = -(n - 1) / 2;
        let hi = n / 2;
        let mut rows = Vec::with_capacity(self.values.len());
        for a in lo..=hi {
            for b in lo..=hi {
                rows.push((a, b, self.at_centered(a, b)));
            }
        }
        rows
    }

    /// CSV with header `mu_k,mu_l,<value_column>`.
    pub fn write_csv<W: Write>(&self, out: W, value_column: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mu_k", "mu_l", value_column])?;
        for (a, b, v) in self.centered_rows() {
            w.write_record([a.to_string(), b.to_string(), format!("{v:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Square matrix indexed by `Λ × Λ` (`N² × N²`), row-major lattice order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMatrix {
    n: usize,
    entries: DMatrix<Complex64>,
}

impl LatticeMatrix {
    pub fn new(n: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: rows });
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, entries: DMatrix::identity(n * n, n * n) }
    }

    /// Convolution operator `(C_a c)(λ) = Σ_μ a(λ − μ) c(μ)`.
    pub fn convolution(a: &LatticeField) -> Self {
        let n = a.n();
        let entries = DMatrix::from_fn(n * n, n * n, |i, j| {
            let lam = LatticePoint::from_index(i, n);
            let mu = LatticePoint::from_index(j, n);
            a.at(lam.sub(&mu))
        });
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: LatticePoint, col: LatticePoint) -> Complex64 {
        self.entries[(row.index(), col.index())]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { left: self.n, right: other.n });
        }
        Ok(Self { n: self.n, entries: &self.entries * &other.entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { left: self.n, right: other.n });
        }
        Ok(Self { n: self.n, entries: &self.entries + &other.entries })
    }

    /// CSV with header `mu_k,mu_l,lam_k,lam_l,re,im`; rows are `μ`, columns `λ`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.n;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mu_k", "mu_l", "lam_k", "lam_l", "re", "im"])?;
        for i in 0..n * n {
            let mu = LatticePoint::from_index(i, n);
            for j in 0..n * n {
                let lam = LatticePoint::from_index(j, n);
                let z = self.entries[(i, j)];
                w.write_record([
                    mu.k.to_string(),
                    mu.l.to_string(),
                    lam.k.to_string(),
                    lam.l.to_string(),
                    format!("{:.17e}", z.re),
                    format!("{:.17e}", z.im),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `d_A(μ) = max_λ |a_{λ, λ−μ}|`.
pub fn diagonal_envelope(a: &LatticeMatrix) -> DecayProfile {
    let n = a.n;
    let values = (0..n * n)
        .into_par_iter()
        .map(|m| {
            let mu = LatticePoint::from_index(m, n);
            LatticePoint::all(n)
                .map(|lam| a.get(lam, lam.sub(&mu)).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    DecayProfile { n, values }
}

/// Class quasi-norm `‖d_A‖_{ℓ^q_{v_s}}`.
pub fn cb_norm(a: &LatticeMatrix, p: &QParams) -> f64 {
    diagonal_envelope(a).qnorm(p)
}

/// Matrix–vector product together with the two norm bounds it must obey.
#[derive(Debug, Clone)]
pub struct BoundedAction {
    pub output: LatticeField,
    pub cb_norm: f64,
    /// `(‖Ac‖₂, ‖A‖·‖c‖₂)`.
    pub l2: (f64, f64),
    /// `(‖Ac‖_{ℓ^q_{v_s}}, ‖A‖·‖c‖_{ℓ^q_{v_s}})`.
    pub weighted: (f64, f64),
}

impl BoundedAction {
    /// Both bounds hold up to a relative slack.
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.l2.0 <= self.l2.1 * (1.0 + rel_slack) && self.weighted.0 <= self.weighted.1 * (1.0 + rel_slack)
    }
}

pub fn lattice_field_qnorm(c: &LatticeField, p: &QParams) -> f64 {
    DecayProfile { n: c.n(), values: c.values().iter().map(|z| z.norm()).collect() }.qnorm(p)
}

pub fn apply_to_sequence(a: &LatticeMatrix, c: &LatticeField, p: &QParams) -> Result<BoundedAction> {
    if c.n() != a.n {
        return Err(Error::ModulusMismatch { left: a.n, right: c.n() });
    }
    let out = &a.entries * c.to_vector();
    let output = LatticeField::from_vector(a.n, &out)?;
    let norm = cb_norm(a, p);
    let l2 = (output.norm_sqr().sqrt(), norm * c.norm_sqr().sqrt());
    let weighted = (lattice_field_qnorm(&output, p), norm * lattice_field_qnorm(c, p));
    Ok(BoundedAction { output, cb_norm: norm, l2, weighted })
}

/// Standard numerical-rank threshold `1e-10 · σ_max`.
pub fn default_rank_tol(a: &DMatrix<Complex64>) -> f64 {
    let smax = a.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max);
    1e-10 * smax.max(f64::MIN_POSITIVE)
}

/// Moore–Penrose pseudo-inverse from the SVD; singular values below
/// `rank_tol` are treated as zero.
pub fn pseudo_inverse(a: &DMatrix<Complex64>, rank_tol: f64) -> Result<DMatrix<Complex64>> {
    if !(rank_tol > 0.0) {
        return Err(Error::InvalidTolerance(rank_tol));
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let (rows, cols) = a.shape();
    let mut out = DMatrix::zeros(cols, rows);
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv < rank_tol {
            continue;
        }
        let vi = v_t.row(i).adjoint();
        let ui = u.column(i).adjoint();
        out += (vi * ui) * Complex64::new(1.0 / sv, 0.0);
    }
    Ok(out)
}

/// Count of singular values at or above `rank_tol`.
pub fn numerical_rank(a: &DMatrix<Complex64>, rank_tol: f64) -> usize {
    a.clone().svd(false, false).singular_values.iter().filter(|&&s| s >= rank_tol).count()
}

/// Largest singular value.
pub fn operator_norm(a: &DMatrix<Complex64>) -> f64 {
    a.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}
