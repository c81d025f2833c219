//! Weyl quantization, the Wigner duality and the Gabor matrix.

use gml::matrix_algebra::{cb_norm, diagonal_envelope};
use gml::phase_space::{GaborSystem, Signal};
use gml::seq_algebra::QParams;
use gml::weyl::{
    default_symbol_window, gabor_matrix, gaussian_bump_symbol, modulation_norm, weyl_dequantize, weyl_quantize,
    wigner,
};
use gml::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gml::Result<()> {
    let n = 7;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sigma = gaussian_bump_symbol(n, Complex64::new(0.5, 0.0), 1.0);
    let op = weyl_quantize(&sigma)?;

    let (f, g) = (Signal::random(n, &mut rng), Signal::random(n, &mut rng));
    let lhs = op.apply(&f)?.inner(&g);
    let w = wigner(&g, &f)?;
    let rhs: Complex64 = sigma.values().iter().zip(w.values()).map(|(s, x)| s * x.conj()).sum::<Complex64>() / n as f64;
    println!("duality defect {:.2e}", (lhs - rhs).norm());

    let back = weyl_dequantize(&op)?;
    let err = back.values().iter().zip(sigma.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("dequantize round trip {err:.2e}");

    let p = QParams::new(0.8, 1.0)?;
    let m = gabor_matrix(&op, &GaborSystem::gaussian(n))?;
    let d = diagonal_envelope(&m);
    println!(
        "cb_norm {:.4}, modulation_norm {:.4}, decay exponent {:?}",
        cb_norm(&m, &p),
        modulation_norm(&sigma, &p, &default_symbol_window(n))?,
        d.decay_exponent()
    );
    for (k, l, v) in d.centered_rows().into_iter().filter(|r| r.1 == 0) {
        println!("  d({k:+}, {l}) = {v:.3e}");
    }
    Ok(())
}
