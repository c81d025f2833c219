//! Weighted convolution quasi-algebras `ℓ^q_{v_s}(Z^m)` of finitely supported
//! sequences.
//!
//! For `0 < q ≤ 1` and `s ≥ 0` the quasi-norm
//! `‖a‖ = (Σ_λ |a(λ)|^q v_s(λ)^q)^{1/q}` with `v_s(λ) = (1 + |λ|)^s` is a
//! `q`-norm (`‖a + b‖^q ≤ ‖a‖^q + ‖b‖^q`) and is submultiplicative under
//! convolution, so the space is a solid quasi-Banach algebra with unit `δ`.
//! Convolution here is exact sparse arithmetic; no transform is involved, so
//! the inequality checks built on top of it see no transform error.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fft;
use crate::stats;

/// Exponent `q ∈ (0, 1]` and weight order `s ≥ 0` of `ℓ^q_{v_s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParams {
    q: f64,
    s: f64,
}

impl QParams {
    pub fn new(q: f64, s: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParams(format!("q must lie in (0, 1], got {q}")));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParams(format!("s must be a finite value >= 0, got {s}")));
        }
        Ok(Self { q, s })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Weight `v_s` at an integer index.
    pub fn weight(&self, lam: &[i64]) -> f64 {
        polynomial_weight(lam, self.s)
    }
}

/// Constants of a quasi-Banach algebra: `‖xy‖ ≤ C_P ‖x‖‖y‖` and the
/// quasi-triangle constant `C_S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraConstants {
    pub product: f64,
    pub quasi_norm: f64,
}

impl AlgebraConstants {
    pub fn new(product: f64, quasi_norm: f64) -> Result<Self> {
        if !(product >= 1.0) || !(quasi_norm >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "algebra constants must be >= 1, got C_P = {product}, C_S = {quasi_norm}"
            )));
        }
        Ok(Self { product, quasi_norm })
    }

    /// Both constants equal 1 for `ℓ^q_{v_s}` measured in its `q`-norm.
    pub fn weighted_lq() -> Self {
        Self { product: 1.0, quasi_norm: 1.0 }
    }
}

/// Euclidean length of an integer index.
pub fn index_norm(lam: &[i64]) -> f64 {
    lam.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt()
}

fn polynomial_weight(lam: &[i64], s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    (1.0 + index_norm(lam)).powf(s)
}

/// `v_s(λ) = (1 + |λ|)^s` with `|·|` the Euclidean norm.
pub fn weight_eval(lam: &[i64], s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParams(format!("weight order must be >= 0, got {s}")));
    }
    Ok(polynomial_weight(lam, s))
}

/// Finitely supported complex sequence on `Z^m`. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSeq {
    dim: usize,
    entries: BTreeMap<Vec<i64>, Complex64>,
}

impl SparseSeq {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "sequence dimension must be at least 1");
        Self { dim, entries: BTreeMap::new() }
    }

    /// Unit element `δ`.
    pub fn delta(dim: usize) -> Self {
        Self::unit(vec![0; dim], Complex64::new(1.0, 0.0))
    }

    /// Single mass `value` at `index`.
    pub fn unit(index: Vec<i64>, value: Complex64) -> Self {
        let mut a = Self::zero(index.len());
        a.insert(index, value);
        a
    }

    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut a = Self::zero(dim);
        for (idx, v) in entries {
            if idx.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: idx.len() });
            }
            a.add_at(idx, v);
        }
        Ok(a)
    }

    /// Sequence on `Z` from consecutive values starting at `offset`.
    pub fn from_slice_1d(offset: i64, values: &[Complex64]) -> Self {
        let mut a = Self::zero(1);
        for (i, &v) in values.iter().enumerate() {
            a.add_at(vec![offset + i as i64], v);
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: &[i64]) -> Complex64 {
        self.entries.get(index).copied().unwrap_or_default()
    }

    /// Overwrites the entry at `index`.
    pub fn insert(&mut self, index: Vec<i64>, value: Complex64) {
        assert_eq!(index.len(), self.dim);
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_at(&mut self, index: Vec<i64>, value: Complex64) {
        assert_eq!(index.len(), self.dim);
        let slot = self.entries.entry(index).or_default();
        *slot += value;
        if *slot == Complex64::new(0.0, 0.0) {
            self.normalize();
        }
    }

    fn normalize(&mut self) {
        self.entries.retain(|_, v| *v != Complex64::new(0.0, 0.0));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.entries {
            out.insert(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_at(k.clone(), *v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Entrywise modulus `|a|`.
    pub fn abs(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.entries {
            out.insert(k.clone(), Complex64::new(v.norm(), 0.0));
        }
        out
    }

    /// Pointwise product `a · b`.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.entries {
            if let Some(w) = other.entries.get(k) {
                out.insert(k.clone(), v * w);
            }
        }
        Ok(out)
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).sum()
    }

    /// Largest Euclidean index length in the support.
    pub fn support_radius(&self) -> f64 {
        self.entries.keys().map(|k| index_norm(k)).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeqLiteral {
    dim: usize,
    entries: Vec<(Vec<i64>, f64, f64)>,
}

impl Serialize for SparseSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeqLiteral {
            dim: self.dim,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.re, v.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparseSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lit = SeqLiteral::deserialize(deserializer)?;
        if lit.dim == 0 {
            return Err(serde::de::Error::custom("dim must be at least 1"));
        }
        SparseSeq::from_entries(
            lit.dim,
            lit.entries.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Weighted quasi-norm `‖a‖_{ℓ^q_{v_s}}`.
pub fn qnorm(a: &SparseSeq, p: &QParams) -> f64 {
    weighted_lp_norm(a, p.q, |lam| p.weight(lam))
}

/// `(Σ |a(λ)|^r w(λ)^r)^{1/r}` for any finite exponent `r > 0`.
pub fn weighted_lp_norm<W>(a: &SparseSeq, r: f64, weight: W) -> f64
where
    W: Fn(&[i64]) -> f64,
{
    assert!(r > 0.0 && r.is_finite());
    let sum: f64 = a.iter().map(|(k, v)| (v.norm() * weight(k)).powf(r)).sum();
    if sum == 0.0 {
        0.0
    } else {
        sum.powf(1.0 / r)
    }
}

/// Exact discrete convolution `(a ∗ b)(n) = Σ_k a(k) b(n − k)`.
pub fn convolve(a: &SparseSeq, b: &SparseSeq) -> Result<SparseSeq> {
    a.check_dim(b)?;
    let mut acc: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for (ka, va) in &a.entries {
        for (kb, vb) in &b.entries {
            let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *acc.entry(k).or_default() += va * vb;
        }
    }
    let mut out = SparseSeq { dim: a.dim, entries: acc };
    out.normalize();
    Ok(out)
}

/// Truncated Neumann series for `(δ − x)^{-1}`.
#[derive(Debug, Clone)]
pub struct NeumannInverse {
    /// `δ + x + … + x^degree`.
    pub inverse: SparseSeq,
    pub degree: usize,
    /// `‖x‖` in the target quasi-norm.
    pub x_norm: f64,
    /// Closed-form bound `(Σ_{j>degree} ‖x‖^{jq})^{1/q}` on the discarded tail.
    pub tail_bound: f64,
}

/// Bound on `‖s − δ − x‖` for the exact inverse `s` of `δ − x` when `C_P = 1`:
/// `‖x‖² / (1 − ‖x‖^q)^{1/q}`.
pub fn neumann_remainder_bound(x_norm: f64, q: f64) -> f64 {
    x_norm * x_norm / (1.0 - x_norm.powf(q)).powf(1.0 / q)
}

/// `(Σ_{j>n} r^{jq})^{1/q}` for `0 ≤ r < 1`.
pub fn geometric_tail(r: f64, q: f64, n: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let rq = r.powf(q);
    (rq.powi(n as i32 + 1) / (1.0 - rq)).powf(1.0 / q)
}

pub fn neumann_inverse(x: &SparseSeq, p: &QParams, tol: f64) -> Result<NeumannInverse> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let r = qnorm(x, p);
    if r >= 1.0 {
        return Err(Error::ContractionViolation { norm: r });
    }
    let mut degree = 0usize;
    while geometric_tail(r, p.q, degree) > tol {
        degree += 1;
    }
    // Horner: s_k = δ + x ∗ s_{k-1}
    let delta = SparseSeq::delta(x.dim);
    let mut s = delta.clone();
    for _ in 0..degree {
        s = convolve(x, &s)?.add(&delta)?;
    }
    Ok(NeumannInverse { inverse: s, degree, x_norm: r, tail_bound: geometric_tail(r, p.q, degree) })
}

/// `F a(ξ) = Σ_n a(n) e^{2πi n·ξ}`.
pub fn fourier_series_eval(a: &SparseSeq, xi: &[f64]) -> Complex64 {
    assert_eq!(xi.len(), a.dim, "frequency dimension must match the sequence");
    a.iter()
        .map(|(k, v)| {
            let phase: f64 = k.iter().zip(xi).map(|(&n, &x)| n as f64 * x).sum();
            v * Complex64::from_polar(1.0, 2.0 * PI * phase)
        })
        .sum()
}

/// Outcome of inverting a sequence through its sampled Fourier series.
#[derive(Debug, Clone)]
pub struct FourierInverse {
    pub inverse: SparseSeq,
    /// `‖a ∗ b − δ‖₁` with exact convolution.
    pub residual_l1: f64,
    /// Minimum of `|F a|` over the sampling grid.
    pub min_abs: f64,
    /// `α` in a least-squares fit `|b(n)| ≈ C e^{-α|n|}` of the shell maxima.
    pub exponential_rate: Option<f64>,
    /// `β` in a least-squares fit `|b(n)| ≈ C (1+|n|)^{-β}`.
    pub polynomial_rate: Option<f64>,
}

/// Relative floor below which a sampled Fourier series counts as vanishing.
pub const FOURIER_FLOOR: f64 = 1e-10;

/// Inverts `a` in the convolution algebra by sampling `1 / F a` on an
/// `M^m` grid and transforming back. Supports `m ∈ {1, 2}`.
pub fn invert_by_fourier(a: &SparseSeq, grid: usize, decay_cutoff: f64) -> Result<FourierInverse> {
    let m = a.dim;
    if m > 2 {
        return Err(Error::InvalidParams(format!("Fourier inversion supports dim <= 2, got {m}")));
    }
    if grid < 2 {
        return Err(Error::InvalidParams(format!("grid resolution must be >= 2, got {grid}")));
    }
    if !(decay_cutoff >= 0.0) {
        return Err(Error::InvalidTolerance(decay_cutoff));
    }
    let size = grid.pow(m as u32);
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    let fold = |k: &[i64]| -> usize {
        k.iter().fold(0usize, |acc, &n| acc * grid + n.rem_euclid(grid as i64) as usize)
    };
    for (k, v) in a.iter() {
        buf[fold(k)] += v;
    }
    // sampled F a: the e^{+2πi n j/M} sum is an unnormalized inverse DFT
    match m {
        1 => fft::Plan::new(grid).inverse(&mut buf),
        _ => fft::inverse_2d(&mut buf, grid, grid),
    }
    let min_abs = buf.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let scale = a.l1_norm();
    if scale == 0.0 || min_abs <= FOURIER_FLOOR * scale {
        return Err(Error::VanishingFourierSeries { min: min_abs });
    }
    for z in buf.iter_mut() {
        *z = z.inv();
    }
    match m {
        1 => fft::Plan::new(grid).forward(&mut buf),
        _ => fft::forward_2d(&mut buf, grid, grid),
    }
    let norm = size as f64;
    let centered = |r: usize| -> i64 {
        if r < grid.div_ceil(2) {
            r as i64
        } else {
            r as i64 - grid as i64
        }
    };
    let mut b = SparseSeq::zero(m);
    for (idx, z) in buf.iter().enumerate() {
        let v = z / norm;
        if v.norm() < decay_cutoff {
            continue;
        }
        let key = if m == 1 {
            vec![centered(idx)]
        } else {
            vec![centered(idx / grid), centered(idx % grid)]
        };
        b.insert(key, v);
    }
    let residual = convolve(a, &b)?.sub(&SparseSeq::delta(m))?.l1_norm();
    let (exponential_rate, polynomial_rate) = decay_rates(&b);
    Ok(FourierInverse { inverse: b, residual_l1: residual, min_abs, exponential_rate, polynomial_rate })
}

/// Shell-maximum decay fits of `|b|` against `|n|` and `log(1 + |n|)`.
fn decay_rates(b: &SparseSeq) -> (Option<f64>, Option<f64>) {
    let mut shells: BTreeMap<u64, f64> = BTreeMap::new();
    for (k, v) in b.iter() {
        let r = index_norm(k).floor() as u64;
        let slot = shells.entry(r).or_insert(0.0);
        *slot = slot.max(v.norm());
    }
    let pts: Vec<(f64, f64)> = shells
        .iter()
        .filter(|(_, &m)| m > 0.0)
        .map(|(&r, &m)| (r as f64, m.ln()))
        .collect();
    if pts.len() < 2 {
        return (None, None);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let log_xs: Vec<f64> = xs.iter().map(|x| (1.0 + x).ln()).collect();
    (
        stats::slope(&xs, &ys).map(|s| -s),
        stats::slope(&log_xs, &ys).map(|s| -s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_eval(&[0, 0], 3.0).unwrap(), 1.0);
        assert!((weight_eval(&[3, 4], 1.0).unwrap() - 6.0).abs() < 1e-15);
        // (1 + √5)² = 6 + 2√5
        let expected = 6.0 + 2.0 * 5f64.sqrt();
        assert!((weight_eval(&[1, 0, 2], 2.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 10.472).abs() < 1e-3);
        assert!(weight_eval(&[1], -0.5).is_err());
    }

    #[test]
    fn qparams_validation() {
        assert!(QParams::new(0.0, 1.0).is_err());
        assert!(QParams::new(1.5, 1.0).is_err());
        assert!(QParams::new(0.5, -1.0).is_err());
        assert!(QParams::new(f64::NAN, 0.0).is_err());
        assert!(QParams::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn qnorm_examples() {
        let delta = SparseSeq::delta(2);
        for (q, s) in [(0.3, 0.0), (1.0, 2.0), (0.5, 4.0)] {
            assert_eq!(qnorm(&delta, &QParams::new(q, s).unwrap()), 1.0);
        }
        let a = SparseSeq::unit(vec![3, 4], c(1.0));
        assert!((qnorm(&a, &QParams::new(0.5, 1.0).unwrap()) - 6.0).abs() < 1e-12);
        let b = SparseSeq::from_slice_1d(0, &[c(1.0), c(1.0)]);
        assert!((qnorm(&b, &QParams::new(1.0, 0.0).unwrap()) - 2.0).abs() < 1e-15);
        assert_eq!(qnorm(&SparseSeq::zero(1), &QParams::new(0.5, 1.0).unwrap()), 0.0);
    }

    #[test]
    fn convolve_examples() {
        let a = SparseSeq::from_slice_1d(-2, &[c(1.0), c(0.0), Complex64::new(2.0, -1.0)]);
        assert_eq!(convolve(&SparseSeq::delta(1), &a).unwrap(), a);
        let s1 = SparseSeq::unit(vec![1], c(1.0));
        let s2 = SparseSeq::unit(vec![2], c(1.0));
        assert_eq!(convolve(&s1, &s2).unwrap(), SparseSeq::unit(vec![3], c(1.0)));
        let b = SparseSeq::from_slice_1d(0, &[c(1.0), c(1.0)]);
        assert_eq!(
            convolve(&b, &b).unwrap(),
            SparseSeq::from_slice_1d(0, &[c(1.0), c(2.0), c(1.0)])
        );
        assert!(matches!(
            convolve(&b, &SparseSeq::delta(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = SparseSeq::from_slice_1d(0, &[c(1.0), c(-1.0)]);
        let b = SparseSeq::from_slice_1d(0, &[c(1.0), c(1.0)]);
        // (1 - z)(1 + z) = 1 - z²
        let p = convolve(&a, &b).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.get(&[1]), c(0.0));
    }

    #[test]
    fn neumann_zero_is_delta() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let inv = neumann_inverse(&SparseSeq::zero(1), &p, 1e-10).unwrap();
        assert_eq!(inv.inverse, SparseSeq::delta(1));
        assert_eq!(inv.degree, 0);
    }

    #[test]
    fn neumann_geometric_l1() {
        let x = SparseSeq::unit(vec![1], c(0.4));
        let p = QParams::new(1.0, 0.0).unwrap();
        let inv = neumann_inverse(&x, &p, 1e-10).unwrap();
        for n in 0..=inv.degree {
            assert!((inv.inverse.get(&[n as i64]).re - 0.4f64.powi(n as i32)).abs() < 1e-15);
        }
        assert!((inv.inverse.l1_norm() - 5.0 / 3.0).abs() < 1e-9);
        let residual = convolve(&SparseSeq::delta(1).sub(&x).unwrap(), &inv.inverse)
            .unwrap()
            .sub(&SparseSeq::delta(1))
            .unwrap();
        assert!(qnorm(&residual, &p) <= 1e-10);
    }

    #[test]
    fn neumann_geometric_quasi_norm_tail() {
        let x = SparseSeq::unit(vec![1], c(0.4));
        let p = QParams::new(0.5, 0.0).unwrap();
        let inv = neumann_inverse(&x, &p, 1e-8).unwrap();
        let n = inv.degree;
        // closed form (Σ_{j>n} 0.4^{j/2})²
        let tail: f64 = (n + 1..4000).map(|j| 0.4f64.powf(j as f64 / 2.0)).sum::<f64>().powi(2);
        assert!((inv.tail_bound - tail).abs() <= 1e-12 * tail.max(1e-300) + 1e-24);
        for k in 0..=n {
            assert!((inv.inverse.get(&[k as i64]).re - 0.4f64.powi(k as i32)).abs() < 1e-15);
        }
        assert!(inv.tail_bound <= 1e-8);
    }

    #[test]
    fn neumann_rejects_non_contraction() {
        let x = SparseSeq::unit(vec![0], c(1.0));
        let p = QParams::new(1.0, 0.0).unwrap();
        assert!(matches!(neumann_inverse(&x, &p, 1e-6), Err(Error::ContractionViolation { .. })));
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(fourier_series_eval(&SparseSeq::delta(1), &[0.37]), c(1.0));
        let a = SparseSeq::from_slice_1d(0, &[c(1.0), c(-0.5)]);
        assert!((fourier_series_eval(&a, &[0.0]) - c(0.5)).norm() < 1e-15);
        let z = SparseSeq::from_slice_1d(0, &[c(1.0), c(-1.0)]);
        assert!(fourier_series_eval(&z, &[0.0]).norm() < 1e-15);
    }

    #[test]
    fn fourier_inversion_examples() {
        let d = invert_by_fourier(&SparseSeq::delta(1), 64, 1e-14).unwrap();
        assert_eq!(d.inverse.len(), 1);
        assert!((d.inverse.get(&[0]) - c(1.0)).norm() < 1e-14);

        let a = SparseSeq::from_slice_1d(0, &[c(1.0), c(-0.5)]);
        let r = invert_by_fourier(&a, 4096, 1e-15).unwrap();
        for n in 0..40 {
            assert!((r.inverse.get(&[n]) - c(0.5f64.powi(n as i32))).norm() < 1e-12);
        }
        assert!(r.residual_l1 < 1e-8);
        // |b(n)| = 2^{-n}
        let rate = r.exponential_rate.unwrap();
        assert!((rate - 2f64.ln()).abs() < 1e-4, "rate {rate}");

        let z = SparseSeq::from_slice_1d(0, &[c(1.0), c(-1.0)]);
        assert!(matches!(
            invert_by_fourier(&z, 4096, 1e-14),
            Err(Error::VanishingFourierSeries { .. })
        ));
    }

    #[test]
    fn fourier_inversion_two_dims() {
        let a = SparseSeq::from_entries(
            2,
            vec![
                (vec![0, 0], c(1.0)),
                (vec![1, 0], c(0.25)),
                (vec![0, -1], Complex64::new(0.0, 0.2)),
            ],
        )
        .unwrap();
        let r = invert_by_fourier(&a, 128, 1e-16).unwrap();
        assert!(r.residual_l1 < 1e-8, "residual {}", r.residual_l1);
    }

    #[test]
    fn json_literal() {
        let a = SparseSeq::from_entries(
            2,
            vec![(vec![0, 1], Complex64::new(1.5, -2.0)), (vec![-3, 2], c(0.25))],
        )
        .unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[[-3,2],0.25,0.0],[[0,1],1.5,-2.0]]}"#);
        let back: SparseSeq = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<SparseSeq>(r#"{"dim":2,"entries":[[[1],1.0,0.0]]}"#).is_err());
    }
}
