//! Weighted convolution quasi-algebra: norms, Neumann and Fourier inversion.

use gml::seq_algebra::{convolve, invert_by_fourier, neumann_inverse, qnorm, QParams, SparseSeq};
use gml::Complex64;

fn main() -> gml::Result<()> {
    let p = QParams::new(0.5, 1.0)?;
    let x = SparseSeq::from_entries(1, [(vec![1], Complex64::new(0.1, 0.0)), (vec![-2], Complex64::new(0.0, 0.02))])?;
    let a = SparseSeq::delta(1).sub(&x)?;
    println!("‖x‖ = {:.4}", qnorm(&x, &p));

    let nv = neumann_inverse(&x, &p, 1e-12)?;
    let res = convolve(&a, &nv.inverse)?.sub(&SparseSeq::delta(1))?;
    println!("Neumann: degree {}, residual {:.2e}, tail bound {:.2e}", nv.degree, qnorm(&res, &p), nv.tail_bound);

    let fi = invert_by_fourier(&a, 2048, 1e-16)?;
    println!(
        "Fourier: residual_l1 {:.2e}, min |â| {:.4}, decay rate {:?}",
        fi.residual_l1, fi.min_abs, fi.exponential_rate
    );

    let bad = SparseSeq::delta(1).sub(&SparseSeq::unit(vec![1], Complex64::new(1.0, 0.0)))?;
    match invert_by_fourier(&bad, 2048, 1e-16) {
        Err(e) => println!("δ − δ₁ rejected: {e}"),
        Ok(_) => println!("δ − δ₁ unexpectedly inverted"),
    }
    Ok(())
}
