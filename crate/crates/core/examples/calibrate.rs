//! Oracle run that fixes the thresholds in `tests/data/calibration.json`.
//!
//! Every quantity is computed by a route that does not go through
//! `fio::envelope` or `invert_fio`: inverses come from a Neumann series or an
//! SVD pseudo-inverse, envelopes are read off the full Gabor matrix, and the
//! tail fraction is recomputed here. Thresholds are the measured worst case
//! times `MARGIN`.
//!
//! ```text
//! cargo run --release --example calibrate
//! ```

use std::collections::BTreeMap;

use gml::amalgam::{conv_embedding_check, FieldPreset, SampledField};
use gml::matrix_algebra::{cb_norm, default_rank_tol, pseudo_inverse};
use gml::metaplectic::SympMat;
use gml::phase_space::{GaborSystem, LatticePoint, Signal};
use gml::seq_algebra::QParams;
use gml::weyl::{default_symbol_window, gabor_matrix, gaussian_bump_symbol, modulation_norm, weyl_quantize, OperatorMatrix};
use gml::fio::sample_operator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MARGIN: f64 = 1.10;
/// Seeds used here; the acceptance suite draws from `0..PAIRS`.
const CAL_SEED_BASE: u64 = 9000;
const PAIRS: u64 = 10;

/// `h(μ) = max_λ |M_{χλ+μ, λ}|` from the Gabor matrix.
fn envelope_via_matrix(op: &OperatorMatrix, chi: &SympMat, sys: &GaborSystem) -> Vec<f64> {
    let n = sys.n();
    let m = gabor_matrix(op, sys).unwrap();
    let mut h = vec![0.0f64; n * n];
    for lam in LatticePoint::all(n) {
        let base = chi.apply(lam);
        for mu in LatticePoint::all(n) {
            let v = m.get(base.add(&mu), lam).norm();
            h[mu.index()] = h[mu.index()].max(v);
        }
    }
    h
}

/// Share of `Σ h^q v_s^q` carried by `|μ| > N/4`, Euclidean centered norm.
fn tail_fraction(h: &[f64], n: usize, q: f64, s: f64) -> f64 {
    let (mut total, mut tail) = (0.0, 0.0);
    for (i, v) in h.iter().enumerate() {
        let (k, l) = (i / n, i % n);
        let ck = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        let cl = if l <= n / 2 { l as f64 } else { l as f64 - n as f64 };
        let r = (ck * ck + cl * cl).sqrt();
        let w = (1.0 + r).powf(s);
        let term = (v * w).powf(q);
        total += term;
        if r > n as f64 / 4.0 {
            tail += term;
        }
    }
    if total > 0.0 { tail / total } else { 0.0 }
}

fn neumann_inverse(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let r = &id - t;
    let mut term = id.clone();
    let mut sum = id;
    for _ in 0..500 {
        term = &term * &r;
        sum += &term;
        if term.norm() < 1e-16 {
            break;
        }
    }
    sum
}

fn pinv(op: &OperatorMatrix) -> OperatorMatrix {
    let m = op.entries();
    OperatorMatrix::new(pseudo_inverse(m, default_rank_tol(m)).unwrap()).unwrap()
}

fn main() {
    let p = QParams::new(0.8, 1.0).unwrap();
    let (q, s) = (p.q(), p.s());
    let mut out = BTreeMap::new();

    // C9: near-identity Weyl operator at N = 31
    let n = 31;
    let sys = GaborSystem::gaussian(n);
    let t = weyl_quantize(&gaussian_bump_symbol(n, Complex64::new(0.1, 0.0), 1.0)).unwrap();
    let tinv = OperatorMatrix::new(neumann_inverse(t.entries())).unwrap();
    let residual = (tinv.entries() * t.entries() - DMatrix::<Complex64>::identity(n, n)).norm();
    let id = SympMat::identity(n);
    let tail_inv = tail_fraction(&envelope_via_matrix(&tinv, &id, &sys), n, q, s);
    let tail_fwd = tail_fraction(&envelope_via_matrix(&t, &id, &sys), n, q, s);
    println!("C9  N={n} neumann residual {residual:.2e}  tail(T) {tail_fwd:.6}  tail(T^-1) {tail_inv:.6}");
    out.insert("inverse_tail_threshold", tail_inv * MARGIN);

    // C10: random Op_w(σ) μ(χ) pairs at N = 11
    let n = 11;
    let sys = GaborSystem::gaussian(n);
    let alt = GaborSystem::parseval(Signal::periodized_gaussian(n, 2.0)).unwrap();
    let (mut compose, mut invert, mut window) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..PAIRS {
        let mut rng = ChaCha8Rng::seed_from_u64(CAL_SEED_BASE + i);
        let (t1, chi1, _) = sample_operator(n, &mut rng).unwrap();
        let (t2, chi2, _) = sample_operator(n, &mut rng).unwrap();
        let tail1 = tail_fraction(&envelope_via_matrix(&t1, &chi1, &sys), n, q, s);
        let tail2 = tail_fraction(&envelope_via_matrix(&t2, &chi2, &sys), n, q, s);
        let t12 = OperatorMatrix::new(t1.entries() * t2.entries()).unwrap();
        let chi12 = chi1.mul(&chi2).unwrap();
        let tail12 = tail_fraction(&envelope_via_matrix(&t12, &chi12, &sys), n, q, s);
        let inv1 = tail_fraction(&envelope_via_matrix(&pinv(&t1), &chi1.inverse(), &sys), n, q, s);
        let alt1 = tail_fraction(&envelope_via_matrix(&t1, &chi1, &alt), n, q, s);
        let c = tail12 / tail1.max(tail2);
        let v = inv1 / tail1;
        let w = (alt1 / tail1).max(tail1 / alt1);
        println!("C10 pair {i}: chi1 {chi1} chi2 {chi2}  compose {c:.4}  invert {v:.4}  window {w:.4}");
        compose = compose.max(c);
        invert = invert.max(v);
        window = window.max(w);
    }
    out.insert("compose_tail_factor", compose * MARGIN);
    out.insert("inverse_tail_factor", invert * MARGIN);
    out.insert("window_tail_factor", window * MARGIN);

    // norm equivalence: cb_norm / modulation_norm over random smooth symbols, N = 7
    let n = 7;
    let sys = GaborSystem::gaussian(n);
    let win = default_symbol_window(n);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(CAL_SEED_BASE + 100 + i);
        let (_, _, sigma) = sample_operator(n, &mut rng).unwrap();
        let m = gabor_matrix(&weyl_quantize(&sigma).unwrap(), &sys).unwrap();
        let r = cb_norm(&m, &p) / modulation_norm(&sigma, &p, &win).unwrap();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    println!("norm equivalence ratio in [{lo:.4}, {hi:.4}]  spread {:.4}", hi / lo);
    out.insert("norm_equivalence_spread", hi / lo * MARGIN);

    // unit-cell bump convolution embedding, R = 2, M = 16
    let bump = SampledField::from_fn(2, 16, |x, y| FieldPreset::Bump.eval(x, y)).unwrap();
    let ratio = conv_embedding_check(&bump, &bump, &QParams::new(1.0, 0.0).unwrap()).unwrap();
    println!("bump embedding ratio {ratio:.6}");
    out.insert("bump_embedding_ratio", ratio * MARGIN);

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/calibration.json");
    std::fs::write(path, serde_json::to_string_pretty(&out).unwrap() + "\n").unwrap();
    println!("wrote {path}");
}
