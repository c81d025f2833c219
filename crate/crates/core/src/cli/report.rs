//! `report.json` plus one CSV per dataset.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::matrix_algebra::{DecayProfile, LatticeMatrix};
use crate::phase_space::LatticeField;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ToleranceFailure,
}

#[derive(Debug, Clone)]
pub enum DatasetData {
    /// `mu_k, mu_l, value` over centered coordinates.
    Envelope(DecayProfile),
    /// `k, l, re, im` over residues.
    Field(LatticeField),
    /// `mu_k, mu_l, lam_k, lam_l, re, im`.
    Matrix(LatticeMatrix),
    Table { columns: Vec<String>, rows: Vec<Vec<String>> },
    /// Written as `<name>.json`.
    Json(serde_json::Value),
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub data: DatasetData,
}

impl Dataset {
    pub fn new(name: &str, data: DatasetData) -> Self {
        Self { name: name.to_string(), data }
    }

    fn file_name(&self) -> String {
        match self.data {
            DatasetData::Json(_) => format!("{}.json", self.name),
            _ => format!("{}.csv", self.name),
        }
    }

    fn columns(&self) -> Vec<String> {
        let fixed: &[&str] = match &self.data {
            DatasetData::Envelope(_) => &["mu_k", "mu_l", "value"],
            DatasetData::Field(_) => &["k", "l", "re", "im"],
            DatasetData::Matrix(_) => &["mu_k", "mu_l", "lam_k", "lam_l", "re", "im"],
            DatasetData::Table { columns, .. } => return columns.clone(),
            DatasetData::Json(_) => &[],
        };
        fixed.iter().map(|s| s.to_string()).collect()
    }

    fn rows(&self) -> usize {
        match &self.data {
            DatasetData::Envelope(p) => p.values().len(),
            DatasetData::Field(f) => f.values().len(),
            DatasetData::Matrix(m) => m.entries().len(),
            DatasetData::Table { rows, .. } => rows.len(),
            DatasetData::Json(_) => 0,
        }
    }
}

/// Results of one run.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub status: Status,
    pub results: serde_json::Value,
    pub datasets: Vec<Dataset>,
}

#[derive(Serialize)]
struct DatasetEntry {
    name: String,
    file: String,
    columns: Vec<String>,
    rows: usize,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    schema_version: u32,
    command: &'a str,
    status: Status,
    config: &'a serde_json::Value,
    results: &'a serde_json::Value,
    datasets: Vec<DatasetEntry>,
}

pub fn write_field_csv<W: std::io::Write>(field: &LatticeField, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "l", "re", "im"])?;
    let n = field.n();
    for k in 0..n {
        for l in 0..n {
            let v = field.get(k, l);
            w.write_record([k.to_string(), l.to_string(), format!("{:.17e}", v.re), format!("{:.17e}", v.im)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the datasets, then `report.json`; returns the report path.
pub fn emit_report(dir: &Path, report: &Report) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(report.datasets.len());
    for ds in &report.datasets {
        let path = dir.join(ds.file_name());
        let file = BufWriter::new(fs::File::create(&path)?);
        match &ds.data {
            DatasetData::Envelope(p) => p.write_csv(file, "value")?,
            DatasetData::Field(f) => write_field_csv(f, file)?,
            DatasetData::Matrix(m) => m.write_csv(file)?,
            DatasetData::Table { columns, rows } => {
                let mut w = csv::Writer::from_writer(file);
                w.write_record(columns)?;
                for r in rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            DatasetData::Json(v) => serde_json::to_writer_pretty(file, v)?,
        }
        entries.push(DatasetEntry { name: ds.name.clone(), file: ds.file_name(), columns: ds.columns(), rows: ds.rows() });
    }
    let body = ReportFile {
        schema_version: SCHEMA_VERSION,
        command: &report.command,
        status: report.status,
        config: &report.config,
        results: &report.results,
        datasets: entries,
    };
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&body)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
