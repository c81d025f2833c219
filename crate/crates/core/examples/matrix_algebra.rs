//! The class C_B of Λ×Λ matrices with a summable diagonal envelope.

use gml::cli::verify::random_decaying_matrix;
use gml::matrix_algebra::{apply_to_sequence, cb_norm, diagonal_envelope, numerical_rank, pseudo_inverse, default_rank_tol};
use gml::phase_space::LatticeField;
use gml::seq_algebra::QParams;
use gml::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gml::Result<()> {
    let n = 5;
    let p = QParams::new(0.5, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_decaying_matrix(&mut rng, n, 1.0);
    let b = random_decaying_matrix(&mut rng, n, 1.5);
    let ab = a.mul(&b)?;
    println!(
        "cb(AB) = {:.4} <= cb(A) cb(B) = {:.4}",
        cb_norm(&ab, &p),
        cb_norm(&a, &p) * cb_norm(&b, &p)
    );
    let conv = diagonal_envelope(&a).convolve(&diagonal_envelope(&b))?;
    let worst = diagonal_envelope(&ab).values().iter().zip(conv.values()).map(|(x, y)| x - y).fold(f64::MIN, f64::max);
    println!("max(d_AB − d_A ∗ d_B) = {worst:.3e}");

    let c = LatticeField::from_fn(n, |k, l| Complex64::new(if (k, l) == (0, 0) { 1.0 } else { 0.0 }, 0.0));
    let act = apply_to_sequence(&a, &c, &p)?;
    println!("ℓ² bound {:.4} <= {:.4}; weighted {:.4} <= {:.4}", act.l2.0, act.l2.1, act.weighted.0, act.weighted.1);

    let m = a.entries();
    let pinv = pseudo_inverse(m, default_rank_tol(m))?;
    println!("rank {}, ‖A A⁺ A − A‖ = {:.2e}", numerical_rank(m, default_rank_tol(m)), (m * &pinv * m - m).norm());
    Ok(())
}
