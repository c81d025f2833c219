mod common;

use gml::amalgam::{amalgam_norm, SampledField};
use gml::cli::verify::{random_decaying_matrix, random_seq};
use gml::fio::{envelope, fio_report, sample_operator};
use gml::matrix_algebra::{cb_norm, LatticeMatrix};
use gml::metaplectic::{build_metaplectic, factor_generators, factor_generators_via_j, SympMat};
use gml::phase_space::{stft, synthesize, tf_shift_matrix, GaborSystem, LatticePoint, Signal};
use gml::seq_algebra::{convolve, qnorm, QParams, SparseSeq};
use gml::weyl::{default_symbol_window, gabor_matrix, modulation_norm, weyl_dequantize, weyl_quantize, OperatorMatrix, Symbol};
use gml::Complex64;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SLACK: f64 = 1e-12;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params() -> impl Strategy<Value = QParams> {
    (0.1f64..=1.0, 0.0f64..3.0).prop_map(|(q, s)| QParams::new(q, s).unwrap())
}

fn odd_prime() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![3usize, 5, 7, 11])
}

/// Entrywise `|b| ≤ |a|`, same support.
fn shrink(a: &SparseSeq, r: &mut ChaCha8Rng) -> SparseSeq {
    let mut b = SparseSeq::zero(a.dim());
    for (k, v) in a.iter() {
        b.insert(k.clone(), v * r.random_range(0.0..=1.0));
    }
    b
}

proptest! {
    #[test]
    fn q_triangle(p in params(), seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let a = random_seq(&mut r, dim, 8, 5);
        let b = random_seq(&mut r, dim, 8, 5);
        let lhs = qnorm(&a.add(&b).unwrap(), &p).powf(p.q());
        let rhs = qnorm(&a, &p).powf(p.q()) + qnorm(&b, &p).powf(p.q());
        prop_assert!(lhs <= rhs * (1.0 + SLACK));
    }

    #[test]
    fn young(p in params(), seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let a = random_seq(&mut r, dim, 8, 5);
        let b = random_seq(&mut r, dim, 8, 5);
        let lhs = qnorm(&convolve(&a, &b).unwrap(), &p);
        prop_assert!(lhs <= qnorm(&a, &p) * qnorm(&b, &p) * (1.0 + SLACK));
    }

    #[test]
    fn inclusion(q1 in 0.1f64..=1.0, dq in 0.0f64..=1.0, s in 0.0f64..3.0, seed in any::<u64>()) {
        let q2 = q1 + dq * (1.0 - q1);
        let a = random_seq(&mut rng(seed), 2, 10, 6);
        let n1 = qnorm(&a, &QParams::new(q1, s).unwrap());
        let n2 = qnorm(&a, &QParams::new(q2, s).unwrap());
        prop_assert!(n2 <= n1 * (1.0 + SLACK));
    }

    #[test]
    fn sequence_solidity(p in params(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_seq(&mut r, 2, 10, 6);
        let b = shrink(&a, &mut r);
        prop_assert!(qnorm(&b, &p) <= qnorm(&a, &p) * (1.0 + SLACK));
    }

    #[test]
    fn quantize_round_trip(n in odd_prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = Symbol::from_fn(n, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
        let back = weyl_dequantize(&weyl_quantize(&sigma).unwrap()).unwrap();
        let err = back.values().iter().zip(sigma.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn parseval(n in odd_prime(), seed in any::<u64>(), c in 0.3f64..3.0) {
        let mut r = rng(seed);
        let sys = GaborSystem::parseval(Signal::periodized_gaussian(n, c)).unwrap();
        let f = Signal::random(n, &mut r);
        let v = stft(&f, sys.window()).unwrap();
        prop_assert!((v.norm_sqr() - f.norm_sqr()).abs() < 1e-12 * f.norm_sqr().max(1.0));
        let back = synthesize(&v, &sys).unwrap();
        prop_assert!(back.sub(&f).norm() < 1e-10);
    }

    #[test]
    fn tf_shift_unitary(n in odd_prime(), k in 0usize..11, l in 0usize..11) {
        let m = tf_shift_matrix(LatticePoint::new(k as i64, l as i64, n));
        let d = (m.adjoint() * &m - DMatrix::<Complex64>::identity(n, n)).norm();
        prop_assert!(d < 1e-12);
        let brute = common::shift(k % n, l % n, n);
        prop_assert!((m - brute).norm() < 1e-12);
    }

    #[test]
    fn factorization_round_trip(n in odd_prime(), seed in any::<u64>()) {
        let chi = SympMat::random(n, &mut rng(seed));
        let w1 = factor_generators(&chi).unwrap();
        let w2 = factor_generators_via_j(&chi).unwrap();
        prop_assert!(w1.len() <= 4 && w2.len() <= 5);
        prop_assert_eq!(w1.matrix(n).unwrap(), chi);
        prop_assert_eq!(w2.matrix(n).unwrap(), chi);
        prop_assert!(build_metaplectic(&w1, n).unwrap().unitary_defect() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cb_submultiplicative(q in prop::sample::select(vec![0.5, 0.8, 1.0]), s in 0.0f64..2.0, seed in any::<u64>()) {
        let p = QParams::new(q, s).unwrap();
        let mut r = rng(seed);
        let a = random_decaying_matrix(&mut r, 5, 1.0);
        let b = random_decaying_matrix(&mut r, 5, 1.5);
        let ab = a.mul(&b).unwrap();
        prop_assert!(cb_norm(&ab, &p) <= cb_norm(&a, &p) * cb_norm(&b, &p) * (1.0 + SLACK));
    }

    #[test]
    fn cb_solidity(p in params(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_decaying_matrix(&mut r, 5, 1.2);
        let b = a.entries().map(|z| z * r.random_range(0.0..=1.0));
        let b = LatticeMatrix::new(5, b).unwrap();
        prop_assert!(cb_norm(&b, &p) <= cb_norm(&a, &p) * (1.0 + SLACK));
    }

    #[test]
    fn amalgam_solidity(p in params(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = SampledField::from_fn(2, 4, |x, y| Complex64::new((-(x * x + y * y)).exp(), 0.0)).unwrap();
        let scaled: Vec<Complex64> = f.values().iter().map(|z| z * r.random_range(0.0..=1.0)).collect();
        let g = SampledField::new(2, 4, scaled).unwrap();
        prop_assert!(amalgam_norm(&g, &p) <= amalgam_norm(&f, &p) * (1.0 + SLACK));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Tail fractions measured with two Gaussian windows agree up to the
    /// calibrated factor.
    #[test]
    fn window_robustness(seed in 1_000u64..1_000_000) {
        let n = 11;
        let factor = common::calibration()["window_tail_factor"];
        let p = QParams::new(0.8, 1.0).unwrap();
        let (t, chi, _) = sample_operator(n, &mut rng(seed)).unwrap();
        let a = fio_report(&envelope(&t, &chi, &GaborSystem::gaussian(n)).unwrap(), &p).tail_fraction;
        let alt = GaborSystem::parseval(Signal::periodized_gaussian(n, 2.0)).unwrap();
        let b = fio_report(&envelope(&t, &chi, &alt).unwrap(), &p).tail_fraction;
        prop_assert!(a / b <= factor && b / a <= factor, "ratio {} vs factor {}", a / b, factor);
    }
}

/// `cb_norm(M(σ)) / modulation_norm(σ)` stays in a band whose spread is
/// below the calibrated bound.
#[test]
fn norm_equivalence_spread() {
    let n = 7;
    let spread_bound = common::calibration()["norm_equivalence_spread"];
    let p = QParams::new(0.8, 1.0).unwrap();
    let sys = GaborSystem::gaussian(n);
    let win = default_symbol_window(n);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for seed in 0..20 {
        let (_, _, sigma) = sample_operator(n, &mut rng(seed)).unwrap();
        let m = gabor_matrix(&weyl_quantize(&sigma).unwrap(), &sys).unwrap();
        let r = cb_norm(&m, &p) / modulation_norm(&sigma, &p, &win).unwrap();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    assert!(hi / lo <= spread_bound, "spread {} exceeds {}", hi / lo, spread_bound);
}

#[test]
fn identity_operator_round_trip() {
    let n = 5;
    let id = OperatorMatrix::identity(n);
    let sigma = weyl_dequantize(&id).unwrap();
    assert!(sigma.values().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
}
