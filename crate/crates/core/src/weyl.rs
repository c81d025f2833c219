//! Finite Weyl calculus on `Z_N` (`N` odd).
//!
//! With `h = (N + 1) / 2` the inverse of 2 mod `N`, the cross-Wigner
//! distribution is
//! `W(f, g)(x, ξ) = Σ_t f(x + h t) conj(g(x − h t)) e^{−2πi ξ t / N}` and the
//! Weyl operator of a symbol `σ` has kernel
//! `K(x, y) = N^{-1} Σ_ξ σ(h(x + y), ξ) e^{2πi ξ (x − y) / N}`. The pair is
//! tied together by the exact duality
//! `⟨Op_w(σ) f, g⟩ = N^{-1} Σ_{x,ξ} σ(x, ξ) conj(W(g, f)(x, ξ))`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{self, Plan};
use crate::matrix_algebra::{DecayProfile, LatticeMatrix};
use crate::phase_space::{
    ensure_odd, half_mod, stft_with_plan, tf_shift, GaborSystem, LatticeField, LatticePoint, Signal,
};
use crate::seq_algebra::QParams;

/// Weyl symbol: a field on `Z_N × Z_N` indexed `(x, ξ)`.
pub type Symbol = LatticeField;

/// Matrix of an operator in Gabor-frame coordinates.
pub type GaborMatrix = LatticeMatrix;

/// `N × N` matrix acting on signals of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("operator entries must be finite".into()));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: DMatrix::identity(n, n) }
    }

    /// Rank-one `f ↦ ⟨f, g⟩ g`.
    pub fn rank_one(g: &Signal) -> Self {
        let v = g.to_vector();
        Self { entries: &v * v.adjoint() }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        if f.n() != self.n() {
            return Err(Error::ModulusMismatch { left: self.n(), right: f.n() });
        }
        Ok(Signal::from_vector(&(&self.entries * f.to_vector())))
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ModulusMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self { entries: &self.entries * &other.entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ModulusMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self { entries: &self.entries + &other.entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ModulusMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self { entries: &self.entries - &other.entries })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { entries: &self.entries * c }
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.entries.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    /// Spectral norm.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    /// `σ_max / σ_min` (infinite when singular).
    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        let hi = sv.iter().copied().fold(0.0, f64::max);
        let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    pub fn try_inverse(&self) -> Result<Self> {
        self.entries
            .clone()
            .try_inverse()
            .map(|entries| Self { entries })
            .ok_or(Error::NotInvertible { condition: f64::INFINITY })
    }

    /// `‖U*U − I‖_op`.
    pub fn unitary_defect(&self) -> f64 {
        let n = self.n();
        let g = self.entries.adjoint() * &self.entries - DMatrix::<Complex64>::identity(n, n);
        g.svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
    }
}

/// Cross-Wigner distribution `W(f, g)`.
pub fn wigner(f: &Signal, g: &Signal) -> Result<Symbol> {
    f.check_modulus(g)?;
    let n = f.n();
    ensure_odd(n)?;
    let h = half_mod(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for (x, row) in buf.chunks_mut(n).enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let ht = (h * t) % n;
            *slot = f.values()[(x + ht) % n] * g.values()[(x + n - ht) % n].conj();
        }
    }
    Plan::new(n).forward(&mut buf);
    LatticeField::new(n, buf)
}

/// Weyl quantization `σ ↦ Op_w(σ)`.
pub fn weyl_quantize(sigma: &Symbol) -> Result<OperatorMatrix> {
    let n = sigma.n();
    ensure_odd(n)?;
    let h = half_mod(n);
    // row a of `rows` holds t ↦ Σ_ξ σ(a, ξ) e^{2πi ξ t/N}
    let mut rows = sigma.values().to_vec();
    Plan::new(n).inverse(&mut rows);
    let inv_n = 1.0 / n as f64;
    let entries = DMatrix::from_fn(n, n, |x, y| {
        let a = (h * (x + y)) % n;
        let t = (x + n - y) % n;
        rows[a * n + t] * inv_n
    });
    Ok(OperatorMatrix { entries })
}

/// Exact inverse of [`weyl_quantize`]: reads the kernel along
/// `(a + h t, a − h t)` and transforms in `t`.
pub fn weyl_dequantize(op: &OperatorMatrix) -> Result<Symbol> {
    let n = op.n();
    ensure_odd(n)?;
    let h = half_mod(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for (a, row) in buf.chunks_mut(n).enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let ht = (h * t) % n;
            *slot = op.entries[((a + ht) % n, (a + n - ht) % n)];
        }
    }
    Plan::new(n).forward(&mut buf);
    LatticeField::new(n, buf)
}

/// `M_{μ,λ} = ⟨T π(λ) g, π(μ) g⟩` over the full lattice.
pub fn gabor_matrix(op: &OperatorMatrix, sys: &GaborSystem) -> Result<GaborMatrix> {
    let n = sys.n();
    if op.n() != n {
        return Err(Error::ModulusMismatch { left: op.n(), right: n });
    }
    let plan = Plan::new(n);
    let columns: Vec<LatticeField> = (0..n * n)
        .into_par_iter()
        .map(|j| {
            let lam = LatticePoint::from_index(j, n);
            let atom = tf_shift(lam, sys.window()).expect("modulus checked");
            let image = op.apply(&atom).expect("modulus checked");
            stft_with_plan(&image, sys.window(), &plan)
        })
        .collect();
    let entries = DMatrix::from_fn(n * n, n * n, |i, j| columns[j].values()[i]);
    LatticeMatrix::new(n, entries)
}

/// Tensor Gaussian `g(x) g(ξ)` on `Z_N × Z_N`, the default window for
/// [`modulation_norm`].
pub fn default_symbol_window(n: usize) -> Symbol {
    let g = Signal::periodized_gaussian(n, 1.0);
    LatticeField::from_fn(n, |x, xi| g.values()[x] * g.values()[xi])
}

/// `ζ ↦ max_z |V_Φ σ(z, ζ)|` where `V_Φ` is the STFT on `(Z_N × Z_N)²`.
pub fn modulation_envelope(sigma: &Symbol, window: &Symbol) -> Result<DecayProfile> {
    let n = sigma.n();
    if window.n() != n {
        return Err(Error::ModulusMismatch { left: n, right: window.n() });
    }
    if window.norm_sqr() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let sup = (0..n * n)
        .into_par_iter()
        .map(|zi| {
            let z = LatticePoint::from_index(zi, n);
            let mut buf: Vec<Complex64> = LatticePoint::all(n)
                .map(|w| sigma.at(w) * window.at(w.sub(&z)).conj())
                .collect();
            fft::forward_2d(&mut buf, n, n);
            buf.into_iter().map(|v| v.norm()).collect::<Vec<f64>>()
        })
        .reduce(
            || vec![0.0; n * n],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect(),
        );
    DecayProfile::new(n, sup)
}

/// Finite `M^{∞,q}_{1⊗v_s}` quasi-norm of a symbol.
pub fn modulation_norm(sigma: &Symbol, p: &QParams, window: &Symbol) -> Result<f64> {
    Ok(modulation_envelope(sigma, window)?.qnorm(p))
}

/// Symbol `1 + amplitude · exp(−π c |z|² / N)` centered at the origin of
/// the phase space.
pub fn gaussian_bump_symbol(n: usize, amplitude: Complex64, c: f64) -> Symbol {
    let g = Signal::periodized_gaussian(n, c);
    LatticeField::from_fn(n, |x, xi| Complex64::new(1.0, 0.0) + amplitude * g.values()[x] * g.values()[xi])
}

/// Plane wave `σ(x, ξ) = e^{2πi (a x + b ξ)/N}`.
pub fn plane_wave_symbol(n: usize, a: i64, b: i64) -> Symbol {
    LatticeField::from_fn(n, |x, xi| {
        let m = (a * x as i64 + b * xi as i64).rem_euclid(n as i64);
        Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symbol(n: usize, rng: &mut ChaCha8Rng) -> Symbol {
        LatticeField::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn brute_wigner(f: &Signal, g: &Signal) -> Symbol {
        let n = f.n();
        let h = half_mod(n);
        LatticeField::from_fn(n, |x, xi| {
            (0..n)
                .map(|t| {
                    f.values()[(x + h * t) % n]
                        * g.values()[(x + n * n - h * t) % n].conj()
                        * Complex64::from_polar(1.0, -2.0 * PI * ((xi * t) % n) as f64 / n as f64)
                })
                .sum()
        })
    }

    fn pairing(sigma: &Symbol, w: &Symbol) -> Complex64 {
        sigma.values().iter().zip(w.values()).map(|(a, b)| a * b.conj()).sum::<Complex64>()
            / sigma.n() as f64
    }

    #[test]
    fn wigner_of_delta() {
        let n = 5;
        let d = Signal::delta(n, 0);
        let w = wigner(&d, &d).unwrap();
        for x in 0..n {
            for xi in 0..n {
                let expected = if x == 0 { 1.0 } else { 0.0 };
                assert!((w.get(x, xi) - Complex64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn wigner_of_even_window_is_real() {
        let g = Signal::periodized_gaussian(9, 1.3);
        let w = wigner(&g, &g).unwrap();
        assert!(w.values().iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn wigner_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let f = Signal::random(7, &mut rng);
        let g = Signal::random(7, &mut rng);
        let fast = wigner(&f, &g).unwrap();
        let slow = brute_wigner(&f, &g);
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(wigner(&Signal::delta(4, 0), &Signal::delta(4, 0)).is_err());
    }

    #[test]
    fn quantize_examples() {
        let n = 5;
        let one = LatticeField::from_fn(n, |_, _| Complex64::new(1.0, 0.0));
        let id = weyl_quantize(&one).unwrap();
        assert!((id.entries() - DMatrix::<Complex64>::identity(n, n)).norm() < 1e-14);

        let modulation = plane_wave_symbol(n, 1, 0);
        let op = weyl_quantize(&modulation).unwrap();
        for x in 0..n {
            for y in 0..n {
                let expected = if x == y {
                    Complex64::from_polar(1.0, 2.0 * PI * x as f64 / n as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((op.entries()[(x, y)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn duality_with_wigner() {
        let n = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sigma = random_symbol(n, &mut rng);
        let op = weyl_quantize(&sigma).unwrap();
        for _ in 0..20 {
            let f = Signal::random(n, &mut rng);
            let g = Signal::random(n, &mut rng);
            let lhs = op.apply(&f).unwrap().inner(&g);
            let rhs = pairing(&sigma, &wigner(&g, &f).unwrap());
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn dequantize_examples() {
        let n = 7;
        let sigma = weyl_dequantize(&OperatorMatrix::identity(n)).unwrap();
        assert!(sigma.values().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-14));

        let g = Signal::periodized_gaussian(n, 1.0);
        let rank_one = weyl_dequantize(&OperatorMatrix::rank_one(&g)).unwrap();
        let w = wigner(&g, &g).unwrap();
        for (a, b) in rank_one.values().iter().zip(w.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        // the scale is pinned by duality: ⟨P f, f⟩ = |⟨f, g⟩|²
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = Signal::random(n, &mut rng);
        let lhs = f.inner(&g).norm_sqr();
        let rhs = pairing(&rank_one, &wigner(&f, &f).unwrap());
        assert!((Complex64::new(lhs, 0.0) - rhs).norm() < 1e-12);

        let t = OperatorMatrix::new(DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }))
        .unwrap();
        let back = weyl_quantize(&weyl_dequantize(&t).unwrap()).unwrap();
        assert!((back.entries() - t.entries()).norm() < 1e-12);
    }

    #[test]
    fn gabor_matrix_of_identity() {
        let n = 5;
        let sys = GaborSystem::gaussian(n);
        let m = gabor_matrix(&OperatorMatrix::identity(n), &sys).unwrap();
        for mu in LatticePoint::all(n) {
            for lam in LatticePoint::all(n) {
                let a = tf_shift(lam, sys.window()).unwrap();
                let b = tf_shift(mu, sys.window()).unwrap();
                assert!((m.get(mu, lam) - a.inner(&b)).norm() < 1e-14);
            }
            // ⟨π(μ)g, π(μ)g⟩ = ‖g‖² = 1/N for a Parseval window
            assert!((m.get(mu, mu).re - sys.window().norm_sqr()).abs() < 1e-14);
            assert!((m.get(mu, mu).re * n as f64 - sys.frame_constant()).abs() < 1e-14);
        }
    }

    #[test]
    fn gabor_matrix_of_shift_is_banded() {
        let n = 5;
        let sys = GaborSystem::gaussian(n);
        let z0 = LatticePoint::new(2, 1, n);
        let shift = OperatorMatrix::new(crate::phase_space::tf_shift_matrix(z0)).unwrap();
        let m = gabor_matrix(&shift, &sys).unwrap();
        let vgg = crate::phase_space::stft(sys.window(), sys.window()).unwrap();
        for mu in LatticePoint::all(n) {
            for lam in LatticePoint::all(n) {
                let expected = vgg.at(mu.sub(&lam).sub(&z0)).norm();
                assert!((m.get(mu, lam).norm() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn commutation_relation() {
        let n = 7;
        let sys = GaborSystem::gaussian(n);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let op = weyl_quantize(&random_symbol(n, &mut rng)).unwrap();
        let m = gabor_matrix(&op, &sys).unwrap();
        let f = Signal::random(n, &mut rng);
        let lhs = crate::phase_space::stft(&op.apply(&f).unwrap(), sys.window()).unwrap();
        let rhs = m.entries() * crate::phase_space::stft(&f, sys.window()).unwrap().to_vector();
        assert!((lhs.to_vector() - rhs).norm() < 1e-10);
    }

    #[test]
    fn modulation_norm_examples() {
        let n = 5;
        let phi = default_symbol_window(n);
        let p = QParams::new(1.0, 0.0).unwrap();
        assert_eq!(modulation_norm(&LatticeField::zeros(n), &p, &phi).unwrap(), 0.0);

        let one = LatticeField::from_fn(n, |_, _| Complex64::new(1.0, 0.0));
        // brute force: V_Φ1(z, ζ) = Σ_w conj(Φ(w − z)) e^{−2πi ζ·w/N}
        let mut brute = 0.0;
        for zeta in LatticePoint::all(n) {
            let mut sup = 0.0f64;
            for z in LatticePoint::all(n) {
                let v: Complex64 = LatticePoint::all(n)
                    .map(|w| {
                        let ph = (zeta.k * w.k + zeta.l * w.l) % n;
                        phi.at(w.sub(&z)).conj()
                            * Complex64::from_polar(1.0, -2.0 * PI * ph as f64 / n as f64)
                    })
                    .sum();
                sup = sup.max(v.norm());
            }
            brute += sup;
        }
        let fast = modulation_norm(&one, &p, &phi).unwrap();
        assert!((fast - brute).abs() < 1e-12 * brute);

        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let sigma = random_symbol(n, &mut rng);
        let q = QParams::new(0.5, 1.0).unwrap();
        let c = Complex64::new(-1.5, 2.0);
        let a = modulation_norm(&sigma.scale(c), &q, &phi).unwrap();
        let b = modulation_norm(&sigma, &q, &phi).unwrap();
        assert!((a - c.norm() * b).abs() < 1e-12 * a);
        assert!(matches!(
            modulation_norm(&sigma, &q, &LatticeField::zeros(n)),
            Err(Error::ZeroWindow)
        ));
    }
}
