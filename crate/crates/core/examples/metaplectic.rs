//! SL(2, Z_N) factorization into J, chirps and dilations, and the
//! metaplectic operators built from the words.

use gml::metaplectic::{
    build_metaplectic, factor_generators, factor_generators_via_j, intertwine_defect, projective_distance, SympMat,
};

fn main() -> gml::Result<()> {
    let n = 5;
    let (mut worst_i, mut worst_p) = (0.0f64, 0.0f64);
    let all = SympMat::all(n);
    for chi in &all {
        let w1 = factor_generators(chi)?;
        let u1 = build_metaplectic(&w1, n)?;
        let u2 = build_metaplectic(&factor_generators_via_j(chi)?, n)?;
        worst_i = worst_i.max(intertwine_defect(chi, &u1)?);
        worst_p = worst_p.max(projective_distance(&u1, &u2)?);
    }
    println!("SL(2,Z_{n}): {} elements, intertwine {worst_i:.2e}, projective {worst_p:.2e}", all.len());

    let chi = SympMat::new(2, 1, 1, 1, 7)?;
    let w = factor_generators(&chi)?;
    println!("{chi} = {}", serde_json::to_string(&w).expect("serializable"));
    Ok(())
}
