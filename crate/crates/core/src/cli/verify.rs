//! Property suite behind `gml verify`.
//!
//! Each suite draws a fixed number of seeded random instances and counts the
//! ones that violate the property beyond its slack.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fio;
use crate::matrix_algebra::{cb_norm, diagonal_envelope, LatticeMatrix};
use crate::metaplectic::{
    build_metaplectic, factor_generators, factor_generators_via_j, intertwine_defect, projective_distance, SympMat,
};
use crate::phase_space::{frame_bounds, stft, synthesize, GaborSystem, LatticeField, LatticePoint, Signal};
use crate::seq_algebra::{
    convolve, invert_by_fourier, neumann_inverse, neumann_remainder_bound, qnorm, weight_eval, weighted_lp_norm, QParams,
    SparseSeq,
};
use crate::weyl::{gabor_matrix, weyl_dequantize, weyl_quantize, wigner, OperatorMatrix};

/// Relative slack for inequalities.
pub const INEQ_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest defect seen, in the suite's own units.
    pub worst: f64,
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, worst: 0.0 }
    }

    fn record(&mut self, defect: f64, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
        self.worst = self.worst.max(defect);
    }

    /// Records `lhs ≤ rhs` with relative slack.
    fn leq(&mut self, lhs: f64, rhs: f64) {
        self.record((lhs - rhs).max(0.0), lhs <= rhs * (1.0 + INEQ_SLACK) + INEQ_SLACK);
    }

    fn below(&mut self, defect: f64, tol: f64) {
        self.record(defect, defect < tol);
    }

    fn done(self) -> SuiteResult {
        SuiteResult { name: self.name, cases: self.cases, failures: self.failures, worst: self.worst }
    }
}

fn c64<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random sequence on `Z^dim` with at most `len` terms in `[−radius, radius]^dim`.
pub fn random_seq<R: Rng>(rng: &mut R, dim: usize, len: usize, radius: i64) -> SparseSeq {
    let mut a = SparseSeq::zero(dim);
    for _ in 0..len {
        let idx = (0..dim).map(|_| rng.random_range(-radius..=radius)).collect();
        a.add_at(idx, c64(rng));
    }
    a
}

fn random_symbol<R: Rng>(rng: &mut R, n: usize) -> LatticeField {
    LatticeField::from_fn(n, |_, _| c64(rng))
}

/// Random matrix on `Λ × Λ` with Gaussian off-diagonal decay.
pub fn random_decaying_matrix<R: Rng>(rng: &mut R, n: usize, width: f64) -> LatticeMatrix {
    let m = DMatrix::from_fn(n * n, n * n, |i, j| {
        let d = LatticePoint::from_index(i, n).sub(&LatticePoint::from_index(j, n)).centered_norm();
        c64(rng) * (-(d * d) / (2.0 * width * width)).exp()
    });
    LatticeMatrix::new(n, m).expect("square")
}

pub fn run_suite(n: usize, p: &QParams, seed: u64) -> Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut t = Tally::new("tight_frame");
    for w in [Signal::delta(n, 0), Signal::periodized_gaussian(n, 1.0), Signal::random(n, &mut rng)] {
        let sys = GaborSystem::new(w)?;
        let (a, b) = frame_bounds(&sys);
        let c = sys.frame_constant();
        t.below(((a - c).abs().max((b - c).abs())) / c, 1e-10);
    }
    out.push(t.done());

    let sys = GaborSystem::gaussian(n);
    let mut t = Tally::new("parseval_round_trip");
    for _ in 0..5 {
        let f = Signal::random(n, &mut rng);
        let back = synthesize(&stft(&f, sys.window())?, &sys)?;
        t.below(back.sub(&f).norm(), 1e-10);
    }
    out.push(t.done());

    let mut t = Tally::new("weyl_duality");
    for _ in 0..20 {
        let sigma = random_symbol(&mut rng, n);
        let (f, g) = (Signal::random(n, &mut rng), Signal::random(n, &mut rng));
        let lhs = weyl_quantize(&sigma)?.apply(&f)?.inner(&g);
        let w = wigner(&g, &f)?;
        let rhs: Complex64 =
            sigma.values().iter().zip(w.values()).map(|(s, x)| s * x.conj()).sum::<Complex64>() / n as f64;
        t.below((lhs - rhs).norm(), 1e-11);
    }
    out.push(t.done());

    let mut t = Tally::new("dequantize_round_trip");
    for _ in 0..5 {
        let sigma = random_symbol(&mut rng, n);
        let back = weyl_dequantize(&weyl_quantize(&sigma)?)?;
        let d = back.values().iter().zip(sigma.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        t.below(d, 1e-12);
    }
    out.push(t.done());

    let mut t = Tally::new("commutation");
    for _ in 0..10 {
        let sigma = random_symbol(&mut rng, n);
        let f = Signal::random(n, &mut rng);
        let op = weyl_quantize(&sigma)?;
        let lhs = stft(&op.apply(&f)?, sys.window())?.to_vector();
        let rhs = gabor_matrix(&op, &sys)?.entries() * stft(&f, sys.window())?.to_vector();
        t.below((lhs - rhs).norm(), 1e-10);
    }
    out.push(t.done());

    let mut young = Tally::new("young");
    let mut tri = Tally::new("q_triangle");
    let mut holder = Tally::new("holder");
    let mut incl = Tally::new("inclusion");
    for _ in 0..200 {
        let dim = rng.random_range(1..=2);
        let a = random_seq(&mut rng, dim, 6, 4);
        let b = random_seq(&mut rng, dim, 6, 4);
        young.leq(qnorm(&convolve(&a, &b)?, p), qnorm(&a, p) * qnorm(&b, p));
        let (na, nb) = (qnorm(&a, p).powf(p.q()), qnorm(&b, p).powf(p.q()));
        tri.leq(qnorm(&a.add(&b)?, p).powf(p.q()), na + nb);
        let s = p.s();
        let lhs = weighted_lp_norm(&a.pointwise(&b)?, 1.0, |_| 1.0);
        let rhs = weighted_lp_norm(&a, 2.0, |k| weight_eval(k, s).expect("s >= 0"))
            * weighted_lp_norm(&b, 2.0, |k| 1.0 / weight_eval(k, s).expect("s >= 0"));
        holder.leq(lhs, rhs);
        let smaller = QParams::new(p.q() / 2.0, s)?;
        incl.leq(qnorm(&a, p), qnorm(&a, &smaller));
    }
    out.extend([young.done(), tri.done(), holder.done(), incl.done()]);

    let mut t = Tally::new("neumann_bound");
    for _ in 0..50 {
        let mut x = random_seq(&mut rng, 1, 4, 3);
        let target = rng.random_range(0.05..0.9);
        x = x.scale(Complex64::new(target / qnorm(&x, p).max(f64::MIN_POSITIVE), 0.0));
        let tol = 1e-10;
        let inv = neumann_inverse(&x, p, tol)?;
        let delta = SparseSeq::delta(1);
        let res = qnorm(&convolve(&delta.sub(&x)?, &inv.inverse)?.sub(&delta)?, p);
        let rem = qnorm(&inv.inverse.sub(&delta)?.sub(&x)?, p);
        let bound = neumann_remainder_bound(inv.x_norm, p.q());
        let ok = res <= tol * (1.0 + 1e-9) && rem <= bound * (1.0 + 1e-9);
        t.record((res - tol).max(0.0).max(rem - bound), ok);
    }
    out.push(t.done());

    let mut t = Tally::new("fourier_inversion");
    for _ in 0..10 {
        let mut a = random_seq(&mut rng, 1, 5, 4);
        let l1 = a.l1_norm();
        a.add_at(vec![0], Complex64::new(2.0 * l1 + 0.5, 0.0));
        let inv = invert_by_fourier(&a, 1024, 1e-16)?;
        t.below(inv.residual_l1, 1e-8);
    }
    for k in 1..=3i64 {
        // F vanishes at ξ = 0
        let a = SparseSeq::delta(1).sub(&SparseSeq::unit(vec![k], Complex64::new(1.0, 0.0)))?;
        let rejected = invert_by_fourier(&a, 1024, 1e-16).is_err();
        t.record(if rejected { 0.0 } else { 1.0 }, rejected);
    }
    out.push(t.done());

    let mut t = Tally::new("cb_algebra");
    let small = n.min(5);
    for _ in 0..10 {
        let a = random_decaying_matrix(&mut rng, small, 1.0);
        let b = random_decaying_matrix(&mut rng, small, 1.5);
        let ab = a.mul(&b)?;
        let (da, db, dab) = (diagonal_envelope(&a), diagonal_envelope(&b), diagonal_envelope(&ab));
        let conv = da.convolve(&db)?;
        let pointwise = dab.values().iter().zip(conv.values()).map(|(x, y)| x - y).fold(0.0, f64::max);
        let norm_ok = cb_norm(&ab, p) <= cb_norm(&a, p) * cb_norm(&b, p) * (1.0 + INEQ_SLACK);
        t.record(pointwise.max(0.0), norm_ok && pointwise <= 1e-12);
    }
    out.push(t.done());

    let mut t = Tally::new("metaplectic");
    let elements = if n <= 7 { SympMat::all(n) } else { (0..30).map(|_| SympMat::random(n, &mut rng)).collect() };
    for chi in elements {
        let w1 = factor_generators(&chi)?;
        let w2 = factor_generators_via_j(&chi)?;
        let exact = w1.matrix(n)? == chi && w2.matrix(n)? == chi;
        let u1 = build_metaplectic(&w1, n)?;
        let u2 = build_metaplectic(&w2, n)?;
        let unit = u1.unitary_defect();
        let inter = intertwine_defect(&chi, &u1)?;
        let proj = projective_distance(&u1, &u2)?;
        let worst = unit.max(inter).max(proj);
        t.record(worst, exact && unit < 1e-12 && inter < 1e-10 && proj < 1e-10);
    }
    out.push(t.done());

    let mut t = Tally::new("fio_adjoint");
    for _ in 0..3 {
        let op = OperatorMatrix::new(DMatrix::from_fn(n, n, |_, _| c64(&mut rng)))?;
        let chi = SympMat::random(n, &mut rng);
        let h = fio::envelope(&op, &chi, &sys)?;
        let hs = fio::envelope(&op.adjoint(), &chi.inverse(), &sys)?;
        let d = LatticePoint::all(n).map(|mu| (hs.at(mu) - h.at(chi.apply(mu).neg())).abs()).fold(0.0, f64::max);
        t.below(d, 1e-12);
    }
    out.push(t.done());

    let mut t = Tally::new("fio_concentration");
    for _ in 0..3 {
        let chi = SympMat::random(n, &mut rng);
        let u = build_metaplectic(&factor_generators(&chi)?, n)?;
        let h = fio::envelope(&u, &chi, &sys)?;
        let v = stft(&u.apply(sys.window())?, sys.window())?;
        let d = LatticePoint::all(n).map(|mu| (h.at(mu) - v.at(mu).norm()).abs()).fold(0.0, f64::max);
        t.below(d, 1e-12);
    }
    out.push(t.done());

    let mut t = Tally::new("fio_factorization");
    for _ in 0..5 {
        let chi = SympMat::random(n, &mut rng);
        let op = fio::generalized_metaplectic(&random_symbol(&mut rng, n), &chi)?;
        let f = fio::factorize_fio(&op, &chi)?;
        t.below(f.residual_left.max(f.residual_right), 1e-9);
    }
    out.push(t.done());

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_five() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let res = run_suite(5, &p, 1).unwrap();
        for s in &res {
            assert_eq!(s.failures, 0, "{} failed: {:?}", s.name, s);
            assert!(s.cases > 0);
        }
        let meta = res.iter().find(|s| s.name == "metaplectic").unwrap();
        assert_eq!(meta.cases, 120);
    }
}
