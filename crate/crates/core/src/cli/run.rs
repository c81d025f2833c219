//! One function per subcommand, each producing a [`Report`].

use serde_json::json;

use super::config::{Command, ExperimentConfig, PhaseSpaceInputs};
use super::report::{Dataset, DatasetData, Report, Status};
use super::verify;
use crate::amalgam::{self, Mat2};
use crate::error::{Error, Result};
use crate::fio::{self, generalized_metaplectic};
use crate::matrix_algebra::{cb_norm, diagonal_envelope};
use crate::metaplectic::factor_generators;
use crate::seq_algebra::{convolve, invert_by_fourier, neumann_inverse, qnorm, SparseSeq};
use crate::weyl::{default_symbol_window, gabor_matrix, modulation_norm, weyl_quantize, OperatorMatrix};

/// Default residual tolerance for `seq-invert`.
pub const SEQ_TOL: f64 = 1e-8;
/// Default residual tolerance for `factorize`.
pub const FACTOR_TOL: f64 = 1e-9;
pub const DEFAULT_COND_TOL: f64 = 1e8;

/// Matrices checked by `amalgam` unless the config lists its own.
pub fn default_gl_matrices() -> Vec<(String, Mat2)> {
    let (c, s) = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    vec![
        ("identity".into(), [[1.0, 0.0], [0.0, 1.0]]),
        ("rotation-90".into(), [[0.0, -1.0], [1.0, 0.0]]),
        ("rotation-45".into(), [[c, -s], [s, c]]),
        ("scaling-2-0.5".into(), [[2.0, 0.0], [0.0, 0.5]]),
        ("shear".into(), [[1.0, 1.0], [0.0, 1.0]]),
    ]
}

fn inputs(cfg: &ExperimentConfig) -> &PhaseSpaceInputs {
    cfg.phase_space.as_ref().expect("phase-space command resolved its inputs")
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let (status, results, datasets) = match cfg.command {
        Command::GaborMatrix => gabor(cfg)?,
        Command::Envelope => envelope(cfg)?,
        Command::Compose => compose(cfg)?,
        Command::Invert => invert(cfg)?,
        Command::Factorize => factorize(cfg)?,
        Command::Amalgam => amalgam_cmd(cfg)?,
        Command::SeqInvert => seq_invert(cfg)?,
        Command::Verify => verify_cmd(cfg)?,
    };
    Ok(Report { command: cfg.command.name().into(), config: cfg.summary(), status, results, datasets })
}

type Outcome = (Status, serde_json::Value, Vec<Dataset>);

fn gabor(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ps = inputs(cfg);
    let op = weyl_quantize(&ps.symbol.value)?;
    let m = gabor_matrix(&op, &ps.system.value)?;
    let d = diagonal_envelope(&m);
    let results = json!({
        "cb_norm": cb_norm(&m, &cfg.params),
        "decay_exponent": d.decay_exponent(),
        "modulation_norm": modulation_norm(&ps.symbol.value, &cfg.params, &default_symbol_window(cfg.n))?,
        "operator_norm": op.op_norm(),
    });
    Ok((
        Status::Ok,
        results,
        vec![
            Dataset::new("gabor_matrix", DatasetData::Matrix(m)),
            Dataset::new("diagonal_envelope", DatasetData::Envelope(d)),
            Dataset::new("symbol", DatasetData::Field(ps.symbol.value.clone())),
        ],
    ))
}

fn operator(cfg: &ExperimentConfig) -> Result<OperatorMatrix> {
    let ps = inputs(cfg);
    generalized_metaplectic(&ps.symbol.value, &ps.chi)
}

fn envelope(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ps = inputs(cfg);
    let h = fio::envelope(&operator(cfg)?, &ps.chi, &ps.system.value)?;
    let report = fio::fio_report(&h, &cfg.params);
    let results = json!({ "report": report, "word": factor_generators(&ps.chi)? });
    Ok((Status::Ok, results, vec![Dataset::new("envelope", DatasetData::Envelope(h.profile))]))
}

fn compose(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ps = inputs(cfg);
    let t1 = operator(cfg)?;
    let t2 = generalized_metaplectic(&ps.symbol2.value, &ps.chi2)?;
    let c = fio::compose_check(&t1, &ps.chi, &t2, &ps.chi2, &ps.system.value, &cfg.params)?;
    let results = json!({
        "composite": c.composite,
        "first": c.first,
        "second": c.second,
        "ratio": c.ratio,
        "chi_product": ps.chi.mul(&ps.chi2)?,
        "symbol2": ps.symbol2.spec,
        "chi2": ps.chi2,
    });
    Ok((Status::Ok, results, vec![Dataset::new("envelope", DatasetData::Envelope(c.envelope.profile))]))
}

fn invert(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ps = inputs(cfg);
    let tol = cfg.options.cond_tol.unwrap_or(DEFAULT_COND_TOL);
    let inv = fio::invert_fio(&operator(cfg)?, &ps.chi, &ps.system.value, &cfg.params, tol)?;
    let results = json!({
        "condition_number": inv.condition,
        "forward": inv.forward,
        "inverse": inv.report,
        "tail_ratio": inv.tail_ratio(),
        "chi_inverse": ps.chi.inverse(),
    });
    Ok((Status::Ok, results, vec![Dataset::new("inverse_envelope", DatasetData::Envelope(inv.envelope.profile))]))
}

fn factorize(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ps = inputs(cfg);
    let f = fio::factorize_fio(&operator(cfg)?, &ps.chi)?;
    let tol = cfg.options.tol.unwrap_or(FACTOR_TOL);
    let ok = f.residual_left < tol && f.residual_right < tol;
    let results = json!({ "factorization": f.summary(), "word": f.word, "tolerance": tol });
    Ok((
        if ok { Status::Ok } else { Status::ToleranceFailure },
        results,
        vec![
            Dataset::new("sigma1", DatasetData::Field(f.sigma1)),
            Dataset::new("sigma2", DatasetData::Field(f.sigma2)),
        ],
    ))
}

fn amalgam_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let field = &cfg.field.as_ref().expect("amalgam field resolved").value;
    let p = &cfg.params;
    let norm = amalgam::amalgam_norm(field, p);
    let embedding = amalgam::conv_embedding_check(field, field, p)?;
    let matrices: Vec<(String, Mat2)> = match &cfg.options.matrices {
        Some(ms) => ms.iter().enumerate().map(|(i, m)| (format!("matrix-{i}"), *m)).collect(),
        None => default_gl_matrices(),
    };
    let mut gl = Vec::new();
    for (name, m) in &matrices {
        let r = amalgam::gl_invariance_check(|x, y| field.interpolate(x, y), m, field.extent(), field.per_cell(), p)?;
        gl.push(json!({ "name": name, "matrix": m, "check": r }));
    }
    let rows = amalgam::cell_maxima(field)
        .into_iter()
        .map(|((a, b), v)| vec![a.to_string(), b.to_string(), format!("{v:.17e}")])
        .collect();
    let results = json!({
        "extent": field.extent(),
        "per_cell": field.per_cell(),
        "norm": norm,
        "boundary_max": field.boundary_max(),
        "conv_embedding_ratio": embedding,
        "gl_invariance": gl,
    });
    let table = DatasetData::Table { columns: vec!["mu_k".into(), "mu_l".into(), "value".into()], rows };
    Ok((Status::Ok, results, vec![Dataset::new("cell_maxima", table)]))
}

fn seq_invert(cfg: &ExperimentConfig) -> Result<Outcome> {
    let a = cfg.sequence.as_ref().expect("sequence resolved");
    let grid = cfg.options.grid.unwrap_or(4096);
    let cutoff = cfg.options.decay_cutoff.unwrap_or(1e-16);
    let tol = cfg.options.tol.unwrap_or(SEQ_TOL);
    let inv = invert_by_fourier(a, grid, cutoff)?;
    // Neumann cross-check when a = δ − x with ‖x‖ < 1
    let x = SparseSeq::delta(a.dim()).sub(a)?;
    let neumann = match neumann_inverse(&x, &cfg.params, tol) {
        Ok(nv) => {
            let diff = nv.inverse.sub(&inv.inverse)?;
            let res = convolve(a, &nv.inverse)?.sub(&SparseSeq::delta(a.dim()))?;
            Some(json!({
                "degree": nv.degree,
                "x_norm": nv.x_norm,
                "tail_bound": nv.tail_bound,
                "residual_qnorm": qnorm(&res, &cfg.params),
                "distance_to_fourier_l1": diff.l1_norm(),
            }))
        }
        Err(Error::ContractionViolation { .. }) => None,
        Err(e) => return Err(e),
    };
    let ok = inv.residual_l1 < tol;
    let results = json!({
        "residual_l1": inv.residual_l1,
        "min_abs_fourier": inv.min_abs,
        "exponential_rate": inv.exponential_rate,
        "polynomial_rate": inv.polynomial_rate,
        "support_size": inv.inverse.len(),
        "tolerance": tol,
        "neumann": neumann,
    });
    Ok((
        if ok { Status::Ok } else { Status::ToleranceFailure },
        results,
        vec![Dataset::new("inverse", DatasetData::Json(serde_json::to_value(&inv.inverse)?))],
    ))
}

fn verify_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let suites = verify::run_suite(cfg.n, &cfg.params, cfg.seed)?;
    let passed = suites.iter().all(|s| s.failures == 0);
    let rows = suites
        .iter()
        .map(|s| {
            vec![
                s.name.to_string(),
                s.cases.to_string(),
                s.failures.to_string(),
                format!("{:.6e}", s.worst),
                if s.failures == 0 { "pass".into() } else { "fail".into() },
            ]
        })
        .collect();
    let results = json!({ "passed": passed, "suites": suites });
    let table = DatasetData::Table {
        columns: ["suite", "cases", "failures", "worst", "status"].iter().map(|s| s.to_string()).collect(),
        rows,
    };
    Ok((
        if passed { Status::Ok } else { Status::ToleranceFailure },
        results,
        vec![Dataset::new("verify", table)],
    ))
}
