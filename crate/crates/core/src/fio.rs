//! Envelopes of generalized metaplectic operators.
//!
//! For an operator `T`, a symplectic `χ` and a window `g`, the envelope
//! `h(μ) = max_λ |⟨T π(λ) g, π(χλ + μ) g⟩|` is the least sequence with
//! `|⟨T π(λ) g, π(ν) g⟩| ≤ h(ν − χλ)` for all `λ, ν`. On a finite lattice
//! every operator has a finite envelope norm, so membership is judged by the
//! scale-free [`FioReport::tail_fraction`] and [`FioReport::decay_exponent`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::Plan;
use crate::matrix_algebra::DecayProfile;
use crate::metaplectic::{build_metaplectic, factor_generators, GeneratorWord, SympMat};
use crate::phase_space::{stft_with_plan, tf_shift, GaborSystem, LatticePoint, Signal};
use crate::seq_algebra::QParams;
use crate::weyl::{weyl_dequantize, weyl_quantize, OperatorMatrix, Symbol};

/// Envelope `μ ↦ h(μ)` together with the matrix it was measured against.
#[derive(Debug, Clone, PartialEq)]
pub struct FioEnvelope {
    pub chi: SympMat,
    pub profile: DecayProfile,
}

impl FioEnvelope {
    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn at(&self, mu: LatticePoint) -> f64 {
        self.profile.at(mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FioReport {
    pub quasi_norm: f64,
    pub tail_fraction: f64,
    pub decay_exponent: Option<f64>,
}

/// Exact envelope over the full lattice.
pub fn envelope(op: &OperatorMatrix, chi: &SympMat, sys: &GaborSystem) -> Result<FioEnvelope> {
    let n = sys.n();
    if op.n() != n {
        return Err(Error::ModulusMismatch { left: op.n(), right: n });
    }
    if chi.n() != n {
        return Err(Error::ModulusMismatch { left: chi.n(), right: n });
    }
    let g = sys.window();
    let plan = Plan::new(n);
    let values = (0..n * n)
        .into_par_iter()
        .map(|j| {
            let lam = LatticePoint::from_index(j, n);
            let image = op.apply(&tf_shift(lam, g).expect("modulus checked")).expect("modulus checked");
            let v = stft_with_plan(&image, g, &plan);
            let base = chi.apply(lam);
            LatticePoint::all(n).map(|mu| v.at(base.add(&mu)).norm()).collect::<Vec<f64>>()
        })
        .reduce(
            || vec![0.0; n * n],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect(),
        );
    Ok(FioEnvelope { chi: *chi, profile: DecayProfile::new(n, values)? })
}

/// Radius beyond which envelope mass counts as tail.
pub fn tail_radius(n: usize) -> f64 {
    n as f64 / 4.0
}

pub fn profile_report(h: &DecayProfile, p: &QParams) -> FioReport {
    let total = h.weighted_mass(p, |_| true);
    let radius = tail_radius(h.n());
    let tail = h.weighted_mass(p, |mu| mu.centered_norm() > radius);
    FioReport {
        quasi_norm: h.qnorm(p),
        tail_fraction: if total > 0.0 { (tail / total).clamp(0.0, 1.0) } else { 0.0 },
        decay_exponent: h.decay_exponent(),
    }
}

pub fn fio_report(h: &FioEnvelope, p: &QParams) -> FioReport {
    profile_report(&h.profile, p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionCheck {
    pub composite: FioReport,
    pub first: FioReport,
    pub second: FioReport,
    /// `‖h_{T1T2}‖ / (‖h_{T1}‖ ‖h_{T2}‖)`.
    pub ratio: f64,
    #[serde(skip)]
    pub envelope: FioEnvelope,
}

/// Envelope of `T1 T2` with respect to `χ1 χ2`, compared with the factors.
pub fn compose_check(
    t1: &OperatorMatrix,
    chi1: &SympMat,
    t2: &OperatorMatrix,
    chi2: &SympMat,
    sys: &GaborSystem,
    p: &QParams,
) -> Result<CompositionCheck> {
    let h1 = envelope(t1, chi1, sys)?;
    let h2 = envelope(t2, chi2, sys)?;
    let h12 = envelope(&t1.compose(t2)?, &chi1.mul(chi2)?, sys)?;
    let (first, second, composite) = (fio_report(&h1, p), fio_report(&h2, p), fio_report(&h12, p));
    let denom = first.quasi_norm * second.quasi_norm;
    let ratio = if denom > 0.0 { composite.quasi_norm / denom } else { f64::INFINITY };
    Ok(CompositionCheck { composite, first, second, ratio, envelope: h12 })
}

#[derive(Debug, Clone)]
pub struct FioInverse {
    pub inverse: OperatorMatrix,
    pub envelope: FioEnvelope,
    pub report: FioReport,
    pub forward: FioReport,
    pub condition: f64,
}

impl FioInverse {
    /// `tail_fraction(T⁻¹) / tail_fraction(T)`; infinite when the forward
    /// tail is zero and the inverse tail is not.
    pub fn tail_ratio(&self) -> f64 {
        match (self.report.tail_fraction, self.forward.tail_fraction) {
            (a, b) if b > 0.0 => a / b,
            (a, _) if a == 0.0 => 1.0,
            _ => f64::INFINITY,
        }
    }
}

/// Inverts `T` and measures the inverse against `χ⁻¹`.
pub fn invert_fio(
    op: &OperatorMatrix,
    chi: &SympMat,
    sys: &GaborSystem,
    p: &QParams,
    cond_tol: f64,
) -> Result<FioInverse> {
    if !(cond_tol > 1.0) {
        return Err(Error::InvalidTolerance(cond_tol));
    }
    let condition = op.condition_number();
    if !(condition < cond_tol) {
        return Err(Error::NotInvertible { condition });
    }
    let inverse = op.try_inverse()?;
    let forward = fio_report(&envelope(op, chi, sys)?, p);
    let env = envelope(&inverse, &chi.inverse(), sys)?;
    let report = fio_report(&env, p);
    Ok(FioInverse { inverse, envelope: env, report, forward, condition })
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub word: GeneratorWord,
    pub metaplectic: OperatorMatrix,
    /// `T = Op_w(σ1) U`.
    pub sigma1: Symbol,
    /// `T = U Op_w(σ2)`.
    pub sigma2: Symbol,
    pub residual_left: f64,
    pub residual_right: f64,
    /// `max_z ||σ2(z)| − |σ1(χ z)||`.
    pub egorov_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationSummary {
    pub residual_left: f64,
    pub residual_right: f64,
    pub egorov_defect: f64,
}

impl Factorization {
    pub fn summary(&self) -> FactorizationSummary {
        FactorizationSummary {
            residual_left: self.residual_left,
            residual_right: self.residual_right,
            egorov_defect: self.egorov_defect,
        }
    }
}

/// Splits `T` as `Op_w(σ1) μ(χ)` and as `μ(χ) Op_w(σ2)`.
pub fn factorize_fio(op: &OperatorMatrix, chi: &SympMat) -> Result<Factorization> {
    let n = chi.n();
    if op.n() != n {
        return Err(Error::ModulusMismatch { left: op.n(), right: n });
    }
    let word = factor_generators(chi)?;
    let u = build_metaplectic(&word, n)?;
    let uinv = u.adjoint();
    let sigma1 = weyl_dequantize(&op.compose(&uinv)?)?;
    let sigma2 = weyl_dequantize(&uinv.compose(op)?)?;
    let residual_left = op.sub(&weyl_quantize(&sigma1)?.compose(&u)?)?.op_norm();
    let residual_right = op.sub(&u.compose(&weyl_quantize(&sigma2)?)?)?.op_norm();
    let egorov_defect = LatticePoint::all(n)
        .map(|z| (sigma2.at(z).norm() - sigma1.at(chi.apply(z)).norm()).abs())
        .fold(0.0, f64::max);
    Ok(Factorization { word, metaplectic: u, sigma1, sigma2, residual_left, residual_right, egorov_defect })
}

/// `Op_w(σ) μ(χ)` for a symbol and a symplectic matrix.
pub fn generalized_metaplectic(sigma: &Symbol, chi: &SympMat) -> Result<OperatorMatrix> {
    let u = build_metaplectic(&factor_generators(chi)?, chi.n())?;
    weyl_quantize(sigma)?.compose(&u)
}

/// Random smooth symbol `1 + a e^{iθ} g_c(x − x₀) g_c(ξ − ξ₀)` with
/// `a ∈ [0.05, 0.3]`, `c ∈ [0.5, 2]` and a uniform shift, paired with a
/// uniform `χ`. The product `Op_w(σ) μ(χ)` is the standard test operator.
pub fn sample_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(OperatorMatrix, SympMat, Symbol)> {
    let amp = Complex64::from_polar(rng.random_range(0.05..0.3), rng.random_range(0.0..std::f64::consts::TAU));
    let c = rng.random_range(0.5..2.0);
    let (x0, xi0) = (rng.random_range(0..n), rng.random_range(0..n));
    let g = Signal::periodized_gaussian(n, c);
    let sigma = Symbol::from_fn(n, |x, xi| {
        Complex64::new(1.0, 0.0) + amp * g.values()[(x + n - x0) % n] * g.values()[(xi + n - xi0) % n]
    });
    let chi = SympMat::random(n, rng);
    Ok((generalized_metaplectic(&sigma, &chi)?, chi, sigma))
}

/// Orthogonal projection onto the first `rank` coordinates.
pub fn coordinate_projection(n: usize, rank: usize) -> OperatorMatrix {
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j && i < rank {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    OperatorMatrix::new(m).expect("finite square matrix")
}
