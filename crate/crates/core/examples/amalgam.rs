//! Wiener amalgam norms of sampled fields: refinement, convolution and
//! invariance under linear changes of variables.

use gml::amalgam::{amalgam_norm, conv_embedding_check, gl_invariance_check, refined_norm, FieldPreset, SampledField};
use gml::seq_algebra::QParams;

fn main() -> gml::Result<()> {
    let p = QParams::new(1.0, 0.0)?;
    for preset in [FieldPreset::Gaussian, FieldPreset::Bump, FieldPreset::ChirpedGaussian] {
        let f = |x: f64, y: f64| preset.eval(x, y);
        let r = refined_norm(f, 3, 16, &p)?;
        let field = SampledField::from_fn(3, 16, f)?;
        println!(
            "{:16} norm {:.5} (2M {:.5}, ±{:.1e}), embedding {:.4}",
            preset.name(),
            amalgam_norm(&field, &p),
            r.fine,
            r.richardson,
            conv_embedding_check(&field, &field, &p)?
        );
    }
    let shear = [[1.0, 1.0], [0.0, 1.0]];
    let g = gl_invariance_check(|x, y| FieldPreset::Gaussian.eval(x, y), &shear, 4, 16, &p)?;
    println!("shear: ratio {:.4}, β {}, bound {}, holds {}", g.ratio, g.beta, g.bound, g.holds);
    Ok(())
}
