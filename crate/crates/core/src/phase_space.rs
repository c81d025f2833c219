//! Discrete phase space `Λ = Z_N × Z_N`: signals, time-frequency shifts,
//! the short-time Fourier transform and Gabor frames over the full lattice.
//!
//! Conventions: `⟨f, g⟩ = Σ_t f(t) conj(g(t))` and
//! `π(k, l) f(t) = e^{2πi l t / N} f(t − k)`. Over the full lattice every
//! nonzero window generates a tight frame with bound `N‖g‖²`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fft::Plan;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Representative of `r mod n` of minimal absolute value; ties (even `n`)
/// resolve to the negative side.
pub fn centered(r: usize, n: usize) -> i64 {
    let r = (r % n) as i64;
    let n = n as i64;
    if 2 * r >= n {
        r - n
    } else {
        r
    }
}

/// Inverse of 2 modulo an odd `n`.
pub fn half_mod(n: usize) -> usize {
    debug_assert!(n % 2 == 1);
    n.div_ceil(2)
}

pub(crate) fn ensure_odd(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n, "must be odd and at least 3"));
    }
    Ok(())
}

/// `e^{2πi m / n}` for an integer numerator reduced mod `n`.
pub(crate) fn root_of_unity(m: i64, n: usize) -> Complex64 {
    let r = m.rem_euclid(n as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / n as f64)
}

/// Complex vector on `Z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidModulus(0, "signal length must be positive"));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![ZERO; n.max(1)] }
    }

    /// Unit mass at `t`.
    pub fn delta(n: usize, t: usize) -> Self {
        let mut s = Self::zeros(n);
        s.values[t % n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_fn<F: FnMut(usize) -> Complex64>(n: usize, f: F) -> Self {
        Self { values: (0..n.max(1)).map(f).collect() }
    }

    /// Periodized Gaussian `Σ_j exp(−π c (t − jN)² / N)`, unnormalized.
    pub fn periodized_gaussian(n: usize, c: f64) -> Self {
        Self::from_fn(n, |t| {
            let t = centered(t, n) as f64;
            let v: f64 = (-6..=6)
                .map(|j| {
                    let u = t - (j * n as i64) as f64;
                    (-PI * c * u * u / n as f64).exp()
                })
                .sum();
            Complex64::new(v, 0.0)
        })
    }

    /// Default analysis window: periodized Gaussian with `c = 1`, scaled so
    /// that `N‖g‖² = 1`.
    pub fn default_window(n: usize) -> Self {
        Self::periodized_gaussian(n, 1.0).parseval_normalized()
    }

    /// Complex Gaussian entries, resampled until nonzero.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let s = Self::from_fn(n, |_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            if s.norm() > 0.0 {
                return s;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|z| z * c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    /// Rescaled copy with `N‖g‖² = 1`.
    pub fn parseval_normalized(&self) -> Self {
        let e = self.n() as f64 * self.norm_sqr();
        if e == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / e.sqrt(), 0.0))
    }

    pub fn to_vector(&self) -> nalgebra::DVector<Complex64> {
        nalgebra::DVector::from_column_slice(&self.values)
    }

    pub fn from_vector(v: &nalgebra::DVector<Complex64>) -> Self {
        Self { values: v.iter().copied().collect() }
    }

    pub(crate) fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::ModulusMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }
}

impl Serialize for Signal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.values.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Signal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Signal::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Point `(k, l)` of `Z_N × Z_N` stored as residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub k: usize,
    pub l: usize,
    pub n: usize,
}

impl LatticePoint {
    pub fn new(k: i64, l: i64, n: usize) -> Self {
        let m = n as i64;
        Self { k: k.rem_euclid(m) as usize, l: l.rem_euclid(m) as usize, n }
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        Self { k: idx / n, l: idx % n, n }
    }

    /// Row-major position in a lattice field.
    pub fn index(&self) -> usize {
        self.k * self.n + self.l
    }

    pub fn centered(&self) -> (i64, i64) {
        (centered(self.k, self.n), centered(self.l, self.n))
    }

    /// Euclidean length of the centered representative.
    pub fn centered_norm(&self) -> f64 {
        let (a, b) = self.centered();
        ((a * a + b * b) as f64).sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new((self.k + other.k) as i64, (self.l + other.l) as i64, self.n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.k as i64 - other.k as i64, self.l as i64 - other.l as i64, self.n)
    }

    pub fn neg(&self) -> Self {
        Self::new(-(self.k as i64), -(self.l as i64), self.n)
    }

    pub fn all(n: usize) -> impl Iterator<Item = LatticePoint> {
        (0..n * n).map(move |i| LatticePoint::from_index(i, n))
    }
}

/// Complex field on `Z_N × Z_N`, row-major in `(k, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    n: usize,
    values: Vec<Complex64>,
}

impl LatticeField {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![ZERO; n * n] }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(n: usize, mut f: F) -> Self {
        Self { n, values: (0..n * n).map(|i| f(i / n, i % n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.values[(k % self.n) * self.n + l % self.n]
    }

    pub fn at(&self, z: LatticePoint) -> Complex64 {
        self.values[z.index()]
    }

    pub fn set(&mut self, k: usize, l: usize, v: Complex64) {
        self.values[k * self.n + l] = v;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, values: self.values.iter().map(|z| z * c).collect() }
    }

    pub fn to_vector(&self) -> nalgebra::DVector<Complex64> {
        nalgebra::DVector::from_column_slice(&self.values)
    }

    pub fn from_vector(n: usize, v: &nalgebra::DVector<Complex64>) -> Result<Self> {
        Self::new(n, v.iter().copied().collect())
    }

    /// Row-major `N × N` array of `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        self.values.chunks(self.n).map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
    }

    pub fn from_rows(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            values.extend(row.into_iter().map(|[re, im]| Complex64::new(re, im)));
        }
        Self::new(n, values)
    }
}

impl Serialize for LatticeField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeField {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        LatticeField::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Gabor system `{π(λ) g : λ ∈ Z_N × Z_N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: Signal,
    normalization: f64,
}

impl GaborSystem {
    /// Uses `window` as given; `normalization` records the factor that would
    /// make it Parseval.
    pub fn new(window: Signal) -> Result<Self> {
        let e = window.n() as f64 * window.norm_sqr();
        if e == 0.0 {
            return Err(Error::ZeroWindow);
        }
        Ok(Self { window, normalization: 1.0 / e.sqrt() })
    }

    /// Rescales `window` so that the system is a Parseval frame.
    pub fn parseval(window: Signal) -> Result<Self> {
        let sys = Self::new(window)?;
        Self::new(sys.window.scale(Complex64::new(sys.normalization, 0.0)))
    }

    /// Parseval system with the default Gaussian window.
    pub fn gaussian(n: usize) -> Self {
        Self::parseval(Signal::periodized_gaussian(n, 1.0)).expect("gaussian window is nonzero")
    }

    pub fn n(&self) -> usize {
        self.window.n()
    }

    pub fn window(&self) -> &Signal {
        &self.window
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Common frame bound `N‖g‖²` of the full-lattice system.
    pub fn frame_constant(&self) -> f64 {
        self.n() as f64 * self.window.norm_sqr()
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        (self.frame_constant() - 1.0).abs() <= tol
    }

    /// Analysis matrix `V` (`N² × N`) with rows `π(λ)g^*`, so `V f = V_g f`.
    pub fn analysis_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut v = DMatrix::zeros(n * n, n);
        for z in LatticePoint::all(n) {
            let atom = tf_shift_unchecked(z, &self.window);
            for t in 0..n {
                v[(z.index(), t)] = atom.values[t].conj();
            }
        }
        v
    }
}

fn tf_shift_unchecked(z: LatticePoint, f: &Signal) -> Signal {
    let n = f.n();
    Signal::from_fn(n, |t| root_of_unity((z.l * t) as i64, n) * f.values[(t + n - z.k) % n])
}

/// `π(z) f(t) = e^{2πi l t/N} f(t − k)`.
pub fn tf_shift(z: LatticePoint, f: &Signal) -> Result<Signal> {
    if z.n != f.n() {
        return Err(Error::ModulusMismatch { left: z.n, right: f.n() });
    }
    Ok(tf_shift_unchecked(z, f))
}

/// `π(z)` as an `N × N` matrix.
pub fn tf_shift_matrix(z: LatticePoint) -> DMatrix<Complex64> {
    let n = z.n;
    let mut m = DMatrix::zeros(n, n);
    for t in 0..n {
        m[(t, (t + n - z.k) % n)] = root_of_unity((z.l * t) as i64, n);
    }
    m
}

/// `V_g f(λ) = ⟨f, π(λ) g⟩` over the full lattice, one length-`N` transform per time index.
pub fn stft(f: &Signal, g: &Signal) -> Result<LatticeField> {
    f.check_modulus(g)?;
    if g.norm_sqr() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    Ok(stft_with_plan(f, g, &Plan::new(f.n())))
}

pub(crate) fn stft_with_plan(f: &Signal, g: &Signal, plan: &Plan) -> LatticeField {
    let n = f.n();
    let mut out = vec![ZERO; n * n];
    for (k, row) in out.chunks_mut(n).enumerate() {
        for t in 0..n {
            row[t] = f.values[t] * g.values[(t + n - k) % n].conj();
        }
    }
    plan.forward(&mut out);
    LatticeField { n, values: out }
}

/// Frame operator `S = Σ_λ ⟨·, π(λ)g⟩ π(λ)g` as an `N × N` matrix.
pub fn frame_operator(sys: &GaborSystem) -> DMatrix<Complex64> {
    let v = sys.analysis_matrix();
    v.adjoint() * v
}

/// Extreme eigenvalues `(A, B)` of the frame operator.
pub fn frame_bounds(sys: &GaborSystem) -> (f64, f64) {
    let eig = frame_operator(sys).symmetric_eigen();
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `Σ_λ c(λ) π(λ) γ` with the canonical dual `γ = g / (N‖g‖²)`; for a
/// Parseval system `γ = g`, so `synthesize(stft(f, g)) = f`.
pub fn synthesize(coeffs: &LatticeField, sys: &GaborSystem) -> Result<Signal> {
    let n = sys.n();
    if coeffs.n != n {
        return Err(Error::ModulusMismatch { left: coeffs.n, right: n });
    }
    let dual_scale = 1.0 / sys.frame_constant();
    let mut rows = coeffs.values.clone();
    // row k becomes t ↦ Σ_l c(k, l) e^{2πi l t/N}
    Plan::new(n).inverse(&mut rows);
    let g = &sys.window.values;
    let out = (0..n)
        .map(|t| {
            (0..n).map(|k| rows[k * n + t] * g[(t + n - k) % n]).sum::<Complex64>() * dual_scale
        })
        .collect();
    Signal::new(out)
}
