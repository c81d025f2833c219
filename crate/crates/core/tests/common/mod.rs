//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the transforms under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use gml::seq_algebra::SparseSeq;
use gml::Complex64;
use nalgebra::DMatrix;

pub fn cis(m: i64, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * m.rem_euclid(n as i64) as f64 / n as f64)
}

pub fn centered(r: usize, n: usize) -> i64 {
    if r <= n / 2 { r as i64 } else { r as i64 - n as i64 }
}

/// `π(k, l)` by its defining formula.
pub fn shift(k: usize, l: usize, n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    for t in 0..n {
        m[(t, (t + n - k % n) % n)] = cis((l * t) as i64, n);
    }
    m
}

/// `V_g f(k, l) = Σ_t f(t) conj(g(t − k)) e^{−2πi l t/N}`, row-major in `(k, l)`.
pub fn stft(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for l in 0..n {
            out[k * n + l] = (0..n).map(|t| f[t] * g[(t + n - k) % n].conj() * cis(-((l * t) as i64), n)).sum();
        }
    }
    out
}

/// Weyl kernel `K(x, y) = (1/N) Σ_ξ σ(h(x + y), ξ) e^{2πi ξ (x − y)/N}`.
pub fn weyl(sigma: &[Complex64], n: usize) -> DMatrix<Complex64> {
    let h = (n + 1) / 2;
    DMatrix::from_fn(n, n, |x, y| {
        let a = (h * (x + y)) % n;
        (0..n).map(|xi| sigma[a * n + xi] * cis(xi as i64 * (x as i64 - y as i64), n)).sum::<Complex64>()
            / n as f64
    })
}

/// `W(f, g)(x, ξ) = Σ_t f(x + h t) conj(g(x − h t)) e^{−2πi ξ t/N}`.
pub fn wigner(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let h = (n + 1) / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for x in 0..n {
        for xi in 0..n {
            out[x * n + xi] = (0..n)
                .map(|t| {
                    let ht = (h * t) % n;
                    f[(x + ht) % n] * g[(x + n - ht) % n].conj() * cis(-((xi * t) as i64), n)
                })
                .sum();
        }
    }
    out
}

pub fn weight(k: &[i64], s: f64) -> f64 {
    (1.0 + k.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()).powf(s)
}

/// `(Σ (|a_k| w_k)^r)^{1/r}`.
pub fn lp_norm<W: Fn(&[i64]) -> f64>(a: &HashMap<Vec<i64>, Complex64>, r: f64, w: W) -> f64 {
    let s: f64 = a.iter().map(|(k, v)| (v.norm() * w(k)).powf(r)).sum();
    if s == 0.0 { 0.0 } else { s.powf(1.0 / r) }
}

pub fn entries(a: &SparseSeq) -> HashMap<Vec<i64>, Complex64> {
    a.iter().map(|(k, v)| (k.clone(), *v)).collect()
}

pub fn conv(a: &HashMap<Vec<i64>, Complex64>, b: &HashMap<Vec<i64>, Complex64>) -> HashMap<Vec<i64>, Complex64> {
    let mut out: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += va * vb;
        }
    }
    out.into_iter().collect()
}

pub fn add(a: &HashMap<Vec<i64>, Complex64>, b: &HashMap<Vec<i64>, Complex64>, c: f64) -> HashMap<Vec<i64>, Complex64> {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += v * c;
    }
    out
}

/// `max_λ |A_{λ+μ, λ}|` on `Z_N²`, indices row-major.
pub fn diag_envelope(a: &DMatrix<Complex64>, n: usize) -> Vec<f64> {
    let mut d = vec![0.0f64; n * n];
    for (mk, ml) in (0..n).flat_map(|k| (0..n).map(move |l| (k, l))) {
        for (k, l) in (0..n).flat_map(|k| (0..n).map(move |l| (k, l))) {
            let row = ((k + mk) % n) * n + (l + ml) % n;
            d[mk * n + ml] = d[mk * n + ml].max(a[(row, k * n + l)].norm());
        }
    }
    d
}

/// `(Σ (h(μ) v_s(μ))^q)^{1/q}` over centered `μ`.
pub fn profile_qnorm(h: &[f64], n: usize, q: f64, s: f64) -> f64 {
    let sum: f64 = h
        .iter()
        .enumerate()
        .map(|(i, v)| (v * weight(&[centered(i / n, n), centered(i % n, n)], s)).powf(q))
        .sum();
    if sum == 0.0 { 0.0 } else { sum.powf(1.0 / q) }
}

/// Cyclic convolution on `Z_N²`.
pub fn cyclic_conv(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n * n {
        for j in 0..n * n {
            let (k, l) = ((i / n + j / n) % n, (i % n + j % n) % n);
            out[k * n + l] += a[i] * b[j];
        }
    }
    out
}

pub fn mat2_mul(x: [[i64; 2]; 2], y: [[i64; 2]; 2], n: i64) -> [[i64; 2]; 2] {
    let mut z = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = (x[i][0] * y[0][j] + x[i][1] * y[1][j]).rem_euclid(n);
        }
    }
    z
}

pub fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Worst cover count of a unit cell under `M`, by sampling each cell's
/// interior and recording which cells the images fall into.
pub fn sampled_beta(m: &[[f64; 2]; 2], extent: i64, samples: usize) -> usize {
    let mut worst = 0;
    for a in -extent..extent {
        for b in -extent..extent {
            let mut hit = std::collections::HashSet::new();
            for i in 0..samples {
                for j in 0..samples {
                    let x = a as f64 + (i as f64 + 0.5) / samples as f64;
                    let y = b as f64 + (j as f64 + 0.5) / samples as f64;
                    let (u, v) = (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y);
                    hit.insert((u.floor() as i64, v.floor() as i64));
                }
            }
            worst = worst.max(hit.len());
        }
    }
    worst
}

pub fn calibration() -> HashMap<String, f64> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/calibration.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("calibration data present")).expect("calibration json")
}
