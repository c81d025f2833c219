//! Experiment configuration: a JSON file merged with command-line overrides,
//! then resolved into concrete windows, symbols and matrices.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amalgam::{FieldPreset, Mat2, SampledField};
use crate::error::{Error, Result};
use crate::metaplectic::{ensure_odd_prime, SympMat};
use crate::phase_space::{ensure_odd, GaborSystem, LatticeField, Signal};
use crate::seq_algebra::{QParams, SparseSeq};
use crate::weyl::{gaussian_bump_symbol, plane_wave_symbol, Symbol};

pub const DEFAULT_N: usize = 7;
pub const DEFAULT_Q: f64 = 0.8;
pub const DEFAULT_S: f64 = 1.0;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GaborMatrix,
    Envelope,
    Compose,
    Invert,
    Factorize,
    Amalgam,
    SeqInvert,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GaborMatrix => "gabor-matrix",
            Command::Envelope => "envelope",
            Command::Compose => "compose",
            Command::Invert => "invert",
            Command::Factorize => "factorize",
            Command::Amalgam => "amalgam",
            Command::SeqInvert => "seq-invert",
            Command::Verify => "verify",
        }
    }

    fn needs_prime(&self) -> bool {
        matches!(
            self,
            Command::Envelope | Command::Compose | Command::Invert | Command::Factorize | Command::Verify
        )
    }

    fn uses_phase_space(&self) -> bool {
        !matches!(self, Command::Amalgam | Command::SeqInvert)
    }
}

/// Command-specific settings; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// Second symbol for `compose`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol2: Option<String>,
    /// Second matrix for `compose`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi2: Option<[[i64; 2]; 2]>,
    /// Condition-number ceiling for `invert`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond_tol: Option<f64>,
    /// Field preset name or CSV path for `amalgam`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_cell: Option<usize>,
    /// Matrices for the GL-invariance check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Mat2>>,
    /// Sequence literal or path for `seq-invert`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_cutoff: Option<f64>,
    /// Residual tolerance for `seq-invert` and `factorize`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// On-disk configuration.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "N", alias = "n")]
    pub n: Option<usize>,
    pub q: Option<f64>,
    pub s: Option<f64>,
    pub window: Option<String>,
    pub symbol: Option<String>,
    pub chi: Option<[[i64; 2]; 2]>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub options: Options,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub q: Option<f64>,
    pub s: Option<f64>,
    pub chi: Option<String>,
    pub window: Option<String>,
    pub symbol: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Parses `"a,b,c,d"`.
pub fn parse_chi(text: &str) -> Result<[[i64; 2]; 2]> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("chi entry {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(Error::Parse(format!("chi needs 4 comma-separated integers, got {}", parts.len()))),
    }
}

/// A named preset or a file, resolved.
#[derive(Debug, Clone)]
pub struct Resolved<T> {
    pub spec: String,
    pub value: T,
}

#[derive(Debug, Clone)]
pub struct PhaseSpaceInputs {
    pub system: Resolved<GaborSystem>,
    pub symbol: Resolved<Symbol>,
    pub chi: SympMat,
    pub symbol2: Resolved<Symbol>,
    pub chi2: SympMat,
}

/// Fully validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: usize,
    pub params: QParams,
    pub seed: u64,
    pub out: PathBuf,
    pub options: Options,
    pub phase_space: Option<PhaseSpaceInputs>,
    pub field: Option<Resolved<SampledField>>,
    pub sequence: Option<SparseSeq>,
}

impl ExperimentConfig {
    /// Merges the file and overrides and resolves every input. Nothing is
    /// written here.
    pub fn resolve(command: Command, file: ConfigFile, over: Overrides) -> Result<Self> {
        let n = over.n.or(file.n).unwrap_or(DEFAULT_N);
        let params = QParams::new(over.q.or(file.q).unwrap_or(DEFAULT_Q), over.s.or(file.s).unwrap_or(DEFAULT_S))?;
        let seed = over.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let out = over.out.or(file.out).unwrap_or_else(|| PathBuf::from("gml-out"));
        let options = file.options;

        if let Some(t) = options.cond_tol {
            if !(t > 1.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        if let Some(t) = options.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }

        let phase_space = if command.uses_phase_space() {
            ensure_odd(n)?;
            if command.needs_prime() {
                ensure_odd_prime(n)?;
            }
            let chi_rows = match over.chi {
                Some(text) => parse_chi(&text)?,
                None => file.chi.unwrap_or([[1, 0], [0, 1]]),
            };
            let chi = SympMat::from_rows(chi_rows, n)?;
            let chi2 = match options.chi2 {
                Some(rows) => SympMat::from_rows(rows, n)?,
                None => chi,
            };
            let window_spec = over.window.or(file.window).unwrap_or_else(|| "gaussian".into());
            let symbol_spec = over.symbol.or(file.symbol).unwrap_or_else(|| "bump".into());
            let symbol2_spec = options.symbol2.clone().unwrap_or_else(|| symbol_spec.clone());
            let system = resolve_window(&window_spec, n, seed)?;
            let symbol = resolve_symbol(&symbol_spec, n, seed)?;
            let symbol2 = resolve_symbol(&symbol2_spec, n, seed.wrapping_add(1))?;
            Some(PhaseSpaceInputs {
                system: Resolved { spec: window_spec, value: system },
                symbol: Resolved { spec: symbol_spec, value: symbol },
                chi,
                symbol2: Resolved { spec: symbol2_spec, value: symbol2 },
                chi2,
            })
        } else {
            None
        };

        let field = if command == Command::Amalgam {
            let spec = options.field.clone().unwrap_or_else(|| "gaussian".into());
            let extent = options.extent.unwrap_or(8);
            let per_cell = options.per_cell.unwrap_or(16);
            Some(Resolved { value: resolve_field(&spec, extent, per_cell)?, spec })
        } else {
            None
        };
        if let Some(ms) = &options.matrices {
            for m in ms {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if !det.is_finite() || det.abs() < 1e-12 {
                    return Err(Error::SingularMatrix);
                }
            }
        }

        let sequence = if command == Command::SeqInvert {
            Some(resolve_sequence(options.sequence.as_ref())?)
        } else {
            None
        };

        Ok(Self { command, n, params, seed, out, options, phase_space, field, sequence })
    }

    /// Echo of the resolved inputs for the report.
    pub fn summary(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "N": self.n,
            "q": self.params.q(),
            "s": self.params.s(),
            "seed": self.seed,
            "options": self.options,
        });
        if let Some(ps) = &self.phase_space {
            v["window"] = ps.system.spec.clone().into();
            v["symbol"] = ps.symbol.spec.clone().into();
            v["chi"] = serde_json::to_value(ps.chi).expect("serializable");
        }
        if let Some(f) = &self.field {
            v["field"] = f.spec.clone().into();
        }
        v
    }
}

fn split_preset(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    }
}

fn parse_num<T: FromStr>(text: Option<&str>, default: T, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match text {
        None => Ok(default),
        Some(t) => t.parse().map_err(|e| Error::Parse(format!("{what} {t:?}: {e}"))),
    }
}

fn looks_like_path(spec: &str) -> bool {
    spec.contains('/') || spec.contains('\\') || spec.ends_with(".json") || spec.ends_with(".csv")
}

/// `gaussian[:c]`, `delta`, `random`, or a JSON signal file. The window is
/// rescaled to a Parseval frame.
pub fn resolve_window(spec: &str, n: usize, seed: u64) -> Result<GaborSystem> {
    let (name, arg) = split_preset(spec);
    let window = match name {
        "gaussian" => {
            let c: f64 = parse_num(arg, 1.0, "gaussian width")?;
            if !(c > 0.0) {
                return Err(Error::InvalidParams(format!("gaussian width must be positive, got {c}")));
            }
            Signal::periodized_gaussian(n, c)
        }
        "delta" => Signal::delta(n, 0),
        "random" => Signal::random(n, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5749_4e44)),
        _ if looks_like_path(spec) => {
            let text = fs::read_to_string(spec).map_err(|e| Error::Parse(format!("window file {spec}: {e}")))?;
            let s: Signal = serde_json::from_str(&text)?;
            if s.n() != n {
                return Err(Error::ModulusMismatch { left: n, right: s.n() });
            }
            s
        }
        _ => return Err(Error::Parse(format!("unknown window {spec:?}"))),
    };
    GaborSystem::parseval(window)
}

/// `identity`, `bump[:amplitude]`, `plane-wave:a:b`, `random`, or a JSON
/// field file.
pub fn resolve_symbol(spec: &str, n: usize, seed: u64) -> Result<Symbol> {
    let (name, arg) = split_preset(spec);
    match name {
        "identity" => Ok(LatticeField::from_fn(n, |_, _| Complex64::new(1.0, 0.0))),
        "bump" => {
            let amp: f64 = parse_num(arg, 0.1, "bump amplitude")?;
            Ok(gaussian_bump_symbol(n, Complex64::new(amp, 0.0), 1.0))
        }
        "plane-wave" => {
            let (a, b) = arg
                .and_then(|t| t.split_once(':'))
                .ok_or_else(|| Error::Parse("plane-wave needs a:b".into()))?;
            Ok(plane_wave_symbol(n, parse_num(Some(a), 0, "plane-wave a")?, parse_num(Some(b), 0, "plane-wave b")?))
        }
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5359_4d42);
            Ok(LatticeField::from_fn(n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }))
        }
        _ if looks_like_path(spec) => {
            let text = fs::read_to_string(spec).map_err(|e| Error::Parse(format!("symbol file {spec}: {e}")))?;
            let f: LatticeField = serde_json::from_str(&text)?;
            if f.n() != n {
                return Err(Error::ModulusMismatch { left: n, right: f.n() });
            }
            Ok(f)
        }
        _ => Err(Error::Parse(format!("unknown symbol {spec:?}"))),
    }
}

/// Named preset or `x,y,value` CSV grid.
pub fn resolve_field(spec: &str, extent: usize, per_cell: usize) -> Result<SampledField> {
    if looks_like_path(spec) {
        let file = fs::File::open(spec).map_err(|e| Error::Parse(format!("field file {spec}: {e}")))?;
        return SampledField::read_csv(file);
    }
    let preset: FieldPreset = spec.parse()?;
    SampledField::from_fn(extent, per_cell, |x, y| preset.eval(x, y))
}

/// Inline `{"dim", "entries"}` literal, a path string, or the default
/// `δ − 0.5·δ_1` on `Z`.
pub fn resolve_sequence(v: Option<&serde_json::Value>) -> Result<SparseSeq> {
    match v {
        None => Ok(SparseSeq::delta(1).sub(&SparseSeq::unit(vec![1], Complex64::new(0.5, 0.0)))?),
        Some(serde_json::Value::String(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("sequence file {path}: {e}")))?;
            Ok(serde_json::from_str(&text)?)
        }
        Some(lit) => Ok(serde_json::from_value(lit.clone())?),
    }
}
