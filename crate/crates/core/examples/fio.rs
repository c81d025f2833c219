//! Envelopes of generalized metaplectic operators: composition, inversion
//! and the two symbol factorizations.

use gml::fio::{compose_check, envelope, factorize_fio, fio_report, invert_fio, sample_operator};
use gml::phase_space::GaborSystem;
use gml::seq_algebra::QParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gml::Result<()> {
    let n = 11;
    let p = QParams::new(0.8, 1.0)?;
    let sys = GaborSystem::gaussian(n);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (t1, chi1, _) = sample_operator(n, &mut rng)?;
    let (t2, chi2, _) = sample_operator(n, &mut rng)?;

    let h = envelope(&t1, &chi1, &sys)?;
    println!("T1 w.r.t. {chi1}: {:?}", fio_report(&h, &p));

    let c = compose_check(&t1, &chi1, &t2, &chi2, &sys, &p)?;
    println!("T1T2: tail {:.4} (factors {:.4}, {:.4}), norm ratio {:.4}", c.composite.tail_fraction, c.first.tail_fraction, c.second.tail_fraction, c.ratio);

    let inv = invert_fio(&t1, &chi1, &sys, &p, 1e8)?;
    println!("T1⁻¹: cond {:.3}, tail ratio {:.4}", inv.condition, inv.tail_ratio());

    let f = factorize_fio(&t1, &chi1)?;
    println!("factorization {:?}", f.summary());
    Ok(())
}
