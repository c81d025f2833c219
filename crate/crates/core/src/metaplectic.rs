//! `SL(2, Z_N)` for an odd prime `N`, its generators and the finite
//! metaplectic operators.
//!
//! A matrix `[[a, b], [c, d]]` acts on the column `(k, l)`. The generators
//! and their operators are
//!
//! * `J = [[0, 1], [−1, 0]]`, `μ(J) = N^{-1/2} e^{−2πi x y / N}`,
//! * `V_C = [[1, 0], [C, 1]]`, `μ(V_C) f(t) = e^{2πi h C t² / N} f(t)`,
//! * `D_a = [[a⁻¹, 0], [0, a]]`, `μ(D_a) f(t) = f(a t)`,
//!
//! with `h = (N + 1) / 2`. Each satisfies `μ(χ) π(z) μ(χ)⁻¹ = c π(χ z)` with
//! a unimodular `c`. Operators are only defined up to a global phase, so
//! every comparison here is phase-aligned first.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{half_mod, root_of_unity, tf_shift_matrix, LatticePoint};
use crate::weyl::OperatorMatrix;

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ensure_odd_prime(n: usize) -> Result<()> {
    if n % 2 == 0 || !is_prime(n) {
        return Err(Error::InvalidModulus(n, "must be an odd prime"));
    }
    Ok(())
}

/// Inverse of `a` modulo `n`, `None` when `gcd(a, n) ≠ 1`.
pub fn mod_inverse(a: i64, n: usize) -> Option<i64> {
    let m = n as i64;
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

/// `[[a, b], [c, d]]` over `Z_N` with `ad − bc ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SympMat {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    n: usize,
}

impl SympMat {
    pub fn new(a: i64, b: i64, c: i64, d: i64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n, "must be at least 2"));
        }
        let m = n as i64;
        let [a, b, c, d] = [a, b, c, d].map(|v| v.rem_euclid(m));
        let det = (a * d - b * c).rem_euclid(m);
        if det != 1 {
            return Err(Error::NotSymplectic { det, modulus: n });
        }
        Ok(Self { a, b, c, d, n })
    }

    pub fn from_rows(rows: [[i64; 2]; 2], n: usize) -> Result<Self> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1], n)
    }

    pub fn identity(n: usize) -> Self {
        Self { a: 1, b: 0, c: 0, d: 1, n }
    }

    pub fn j(n: usize) -> Self {
        Self { a: 0, b: 1, c: n as i64 - 1, d: 0, n }
    }

    pub fn chirp(c: i64, n: usize) -> Self {
        Self { a: 1, b: 0, c: c.rem_euclid(n as i64), d: 1, n }
    }

    pub fn dilate(a: i64, n: usize) -> Result<Self> {
        let inv = mod_inverse(a, n)
            .ok_or_else(|| Error::InvalidGenerator(format!("dilation by {a} is not invertible mod {n}")))?;
        Ok(Self { a: inv, b: 0, c: 0, d: a.rem_euclid(n as i64), n })
    }

    /// Every element of the group, in lexicographic order of `(a, b, c, d)`.
    pub fn all(n: usize) -> Vec<Self> {
        let m = n as i64;
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        if (a * d - b * c).rem_euclid(m) == 1 {
                            out.push(Self { a, b, c, d, n });
                        }
                    }
                }
            }
        }
        out
    }

    /// Uniform draw by rejection.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let m = n as i64;
        loop {
            let [a, b, c, d] = [(); 4].map(|_| rng.random_range(0..m));
            if (a * d - b * c).rem_euclid(m) == 1 {
                return Self { a, b, c, d, n };
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { left: self.n, right: other.n });
        }
        let m = self.n as i64;
        Ok(Self {
            a: (self.a * other.a + self.b * other.c).rem_euclid(m),
            b: (self.a * other.b + self.b * other.d).rem_euclid(m),
            c: (self.c * other.a + self.d * other.c).rem_euclid(m),
            d: (self.c * other.b + self.d * other.d).rem_euclid(m),
            n: self.n,
        })
    }

    pub fn inverse(&self) -> Self {
        let m = self.n as i64;
        Self { a: self.d, b: (-self.b).rem_euclid(m), c: (-self.c).rem_euclid(m), d: self.a, n: self.n }
    }

    /// `χ (k, l)ᵀ`.
    pub fn apply(&self, z: LatticePoint) -> LatticePoint {
        let (k, l) = (z.k as i64, z.l as i64);
        LatticePoint::new(self.a * k + self.b * l, self.c * k + self.d * l, self.n)
    }
}

impl fmt::Display for SympMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]] mod {}", self.a, self.b, self.c, self.d, self.n)
    }
}

impl Serialize for SympMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// One factor of a [`GeneratorWord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    J,
    Chirp(i64),
    Dilate(i64),
}

impl Generator {
    pub fn matrix(&self, n: usize) -> Result<SympMat> {
        match *self {
            Generator::J => Ok(SympMat::j(n)),
            Generator::Chirp(c) => Ok(SympMat::chirp(c, n)),
            Generator::Dilate(a) => SympMat::dilate(a, n),
        }
    }

    pub fn operator(&self, n: usize) -> Result<DMatrix<Complex64>> {
        let h = half_mod(n) as i64;
        match *self {
            Generator::J => {
                let s = 1.0 / (n as f64).sqrt();
                Ok(DMatrix::from_fn(n, n, |x, y| root_of_unity(-((x * y) as i64), n) * s))
            }
            Generator::Chirp(c) => Ok(DMatrix::from_fn(n, n, |x, y| {
                if x == y {
                    let t = x as i64;
                    root_of_unity(h * c.rem_euclid(n as i64) * t * t, n)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })),
            Generator::Dilate(a) => {
                let a = a.rem_euclid(n as i64);
                if mod_inverse(a, n).is_none() {
                    return Err(Error::InvalidGenerator(format!("Dilate({a}) mod {n}")));
                }
                let mut m = DMatrix::zeros(n, n);
                for t in 0..n {
                    m[(t, (a as usize * t) % n)] = Complex64::new(1.0, 0.0);
                }
                Ok(m)
            }
        }
    }
}

/// Ordered product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorWord(pub Vec<Generator>);

impl GeneratorWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[Generator] {
        &self.0
    }

    /// Product of the generator matrices over `Z_N`.
    pub fn matrix(&self, n: usize) -> Result<SympMat> {
        self.0.iter().try_fold(SympMat::identity(n), |acc, g| acc.mul(&g.matrix(n)?))
    }

    fn push_nontrivial(&mut self, g: Generator, n: usize) {
        let m = n as i64;
        match g {
            Generator::Chirp(c) if c.rem_euclid(m) == 0 => {}
            Generator::Dilate(a) if a.rem_euclid(m) == 1 => {}
            Generator::Chirp(c) => self.0.push(Generator::Chirp(c.rem_euclid(m))),
            Generator::Dilate(a) => self.0.push(Generator::Dilate(a.rem_euclid(m))),
            Generator::J => self.0.push(g),
        }
    }
}

/// Word of length at most 4 whose product is `chi`.
///
/// For `b ≠ 0`: `χ = V_{d/b} J D_b V_{a/b}`. For `b = 0`: `χ = V_{c/a} D_{1/a}`.
/// Trivial factors are dropped.
pub fn factor_generators(chi: &SympMat) -> Result<GeneratorWord> {
    let n = chi.n;
    ensure_odd_prime(n)?;
    let mut w = GeneratorWord::default();
    if chi.b != 0 {
        let binv = mod_inverse(chi.b, n).expect("N prime");
        w.push_nontrivial(Generator::Chirp(chi.d * binv), n);
        w.push_nontrivial(Generator::J, n);
        w.push_nontrivial(Generator::Dilate(chi.b), n);
        w.push_nontrivial(Generator::Chirp(chi.a * binv), n);
    } else {
        let ainv = mod_inverse(chi.a, n).expect("det 1 forces a invertible");
        w.push_nontrivial(Generator::Chirp(chi.c * ainv), n);
        w.push_nontrivial(Generator::Dilate(ainv), n);
    }
    Ok(w)
}

/// Second factorization `χ = J · (J⁻¹ χ)`, length at most 5; used to test
/// that the operator does not depend on the word beyond a phase.
pub fn factor_generators_via_j(chi: &SympMat) -> Result<GeneratorWord> {
    let rest = SympMat::j(chi.n).inverse().mul(chi)?;
    let mut w = GeneratorWord(vec![Generator::J]);
    w.0.extend(factor_generators(&rest)?.0);
    Ok(w)
}

/// `μ(w₁) μ(w₂) ⋯` as an `N × N` unitary.
pub fn build_metaplectic(word: &GeneratorWord, n: usize) -> Result<OperatorMatrix> {
    ensure_odd_prime(n)?;
    let mut u = DMatrix::<Complex64>::identity(n, n);
    for g in word.tokens() {
        u *= g.operator(n)?;
    }
    OperatorMatrix::new(u)
}

/// Unimodular `c` minimizing `‖a − c b‖_F`, i.e. the phase of `tr(b* a)`.
pub fn align_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let t: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
    if t.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        t / t.norm()
    }
}

/// `max |u1 − c u2|` entrywise after phase alignment.
pub fn projective_distance(u1: &OperatorMatrix, u2: &OperatorMatrix) -> Result<f64> {
    if u1.n() != u2.n() {
        return Err(Error::ModulusMismatch { left: u1.n(), right: u2.n() });
    }
    let c = align_phase(u1.entries(), u2.entries());
    Ok(u1.entries().iter().zip(u2.entries().iter()).map(|(x, y)| (x - c * y).norm()).fold(0.0, f64::max))
}

/// `max_z min_{|c| = 1} ‖U π(z) U⁻¹ − c π(χ z)‖_op`.
///
/// The phase is chosen by Frobenius alignment, which bounds the operator-norm
/// minimum from above.
pub fn intertwine_defect(chi: &SympMat, u: &OperatorMatrix) -> Result<f64> {
    let n = chi.n;
    if u.n() != n {
        return Err(Error::ModulusMismatch { left: u.n(), right: n });
    }
    let defect = u.unitary_defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary { defect });
    }
    let um = u.entries();
    let uinv = um.adjoint();
    let mut worst = 0.0f64;
    for z in LatticePoint::all(n) {
        let a = um * tf_shift_matrix(z) * &uinv;
        let b = tf_shift_matrix(chi.apply(z));
        let c = align_phase(&a, &b);
        let d = (a - b * c).svd(false, false).singular_values.iter().copied().fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}
