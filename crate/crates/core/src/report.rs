//! Run artifacts: the JSON report, the certificate file, and checking a set of
//! artifacts against the presentation they came from.
//!
//! A run directory holds `summand_0000.scc`, `summand_0001.scc`, ...,
//! `certificate.json` and `report.json`. The certificate stores `Q` and `P` by
//! columns and, per summand, the rows and columns of the transformed matrix it
//! occupies. When the input had to be minimised first, `minimized` is set and
//! the transformations refer to `minimize(input)`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::{verify, CertificateError, Decomposition, Stats, Strategy, Summand};
use crate::field::Field;
use crate::graded::{minimize, GradedMatrix};
use crate::scc::{parse_scc2020, write_scc2020, SccError};
use crate::signature::Signature;
use crate::sparse::SparseVec;

/// Bumped whenever a field of [`Report`] or [`Certificate`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const CERTIFICATE_FILE: &str = "certificate.json";
pub const REPORT_FILE: &str = "report.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Size {
    pub generators: usize,
    pub relations: usize,
}

impl Size {
    pub fn of(m: &GradedMatrix) -> Self {
        Size { generators: m.num_rows(), relations: m.num_cols() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummandReport {
    pub generators: usize,
    pub relations: usize,
    /// Hex SHA-256 of the summand's [`Signature`].
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<bool>,
}

/// Seconds spent per phase. `parse` and `verify` are filled in by the caller.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub parse: f64,
    pub minimize: f64,
    pub decompose: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub strategy: Strategy,
    pub field: Field,
    pub input: Size,
    /// Size of the presentation after minimisation, if it changed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimized: Option<Size>,
    pub num_summands: usize,
    pub summands: Vec<SummandReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval_decomposable: Option<bool>,
    /// Largest batch of relations sharing one degree.
    pub k_max: usize,
    /// Largest number of earlier relations split jointly with a batch.
    pub kappa_max: usize,
    pub subspace_iterations: u64,
    pub stats: Stats,
    pub timings: PhaseTimings,
    /// Bytes held by the input, the transformations and the summands.
    pub memory_estimate_bytes: u64,
    /// High-water resident set size reported by the OS, where available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_rss_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

const ENTRY_BYTES: u64 = std::mem::size_of::<(u32, u8)>() as u64;
const VEC_BYTES: u64 = std::mem::size_of::<Vec<u8>>() as u64;

fn matrix_bytes(m: &GradedMatrix) -> u64 {
    let degrees = ((m.num_rows() + m.num_cols()) * m.dim() * 8) as u64;
    degrees + m.nnz() as u64 * ENTRY_BYTES + m.num_cols() as u64 * VEC_BYTES
}

fn columns_bytes(cols: &[SparseVec]) -> u64 {
    cols.iter().map(|c| c.len() as u64 * ENTRY_BYTES + VEC_BYTES).sum()
}

/// Peak resident set size from `/proc/self/status`.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

impl Report {
    /// `original` is the presentation as read, before any minimisation.
    pub fn new(original: &GradedMatrix, d: &Decomposition) -> Self {
        let summands: Vec<SummandReport> = d
            .summands
            .iter()
            .map(|s| SummandReport {
                generators: s.rows.len(),
                relations: s.cols.len(),
                digest: Signature::of(&s.matrix).digest(),
                interval: d.interval_decomposable().map(|_| s.interval.is_some()),
            })
            .collect();
        let memory = matrix_bytes(original)
            + matrix_bytes(&d.input)
            + columns_bytes(&d.q)
            + columns_bytes(&d.p)
            + d.summands.iter().map(|s| matrix_bytes(&s.matrix)).sum::<u64>();
        Report {
            schema_version: SCHEMA_VERSION,
            strategy: d.strategy,
            field: original.field(),
            input: Size::of(original),
            minimized: d.removed.map(|_| Size::of(&d.input)),
            num_summands: summands.len(),
            summands,
            interval_decomposable: d.interval_decomposable(),
            k_max: d.stats.max_batch,
            kappa_max: d.stats.max_cocycle,
            subspace_iterations: d.stats.subspace_iterations,
            stats: d.stats.clone(),
            timings: PhaseTimings {
                minimize: d.timings.minimize,
                decompose: d.timings.decompose,
                ..PhaseTimings::default()
            },
            memory_estimate_bytes: memory,
            peak_rss_bytes: peak_rss_bytes(),
            verified: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub field: Field,
    pub minimized: bool,
    pub input: Size,
    pub q: Vec<SparseVec>,
    pub p: Vec<SparseVec>,
    pub summands: Vec<Part>,
}

impl Certificate {
    pub fn of(d: &Decomposition) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            field: d.input.field(),
            minimized: d.removed.is_some(),
            input: Size::of(&d.input),
            q: d.q.clone(),
            p: d.p.clone(),
            summands: d.summands.iter().map(|s| Part { rows: s.rows.clone(), cols: s.cols.clone() }).collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Scc { path: PathBuf, source: SccError },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("certificate lists {expected} summands but {got} summand files were given")]
    SummandCount { expected: usize, got: usize },
    #[error("certificate was made over F_{expected}, input is over F_{got}")]
    FieldMismatch { expected: u32, got: u32 },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

impl ArtifactError {
    /// Whether the artifacts were readable but do not certify the decomposition.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            ArtifactError::Certificate(_) | ArtifactError::SummandCount { .. } | ArtifactError::FieldMismatch { .. }
        )
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ArtifactError + '_ {
    move |source| ArtifactError::Io { path: path.to_path_buf(), source }
}

pub fn summand_file_name(i: usize) -> String {
    format!("summand_{i:04}.scc")
}

pub fn read_scc(path: &Path, field: Field) -> Result<GradedMatrix, ArtifactError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_scc2020(&text, field).map_err(|source| ArtifactError::Scc { path: path.to_path_buf(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ArtifactError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|source| ArtifactError::Json { path: path.to_path_buf(), source })?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ArtifactError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| ArtifactError::Json { path: path.to_path_buf(), source })
}

/// Writes the summand files and the certificate into `dir`, returning the
/// summand paths in order.
pub fn write_artifacts(dir: &Path, d: &Decomposition) -> Result<Vec<PathBuf>, ArtifactError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = Vec::with_capacity(d.summands.len());
    for (i, s) in d.summands.iter().enumerate() {
        let path = dir.join(summand_file_name(i));
        fs::write(&path, write_scc2020(&s.matrix)).map_err(io_err(&path))?;
        paths.push(path);
    }
    write_json(&dir.join(CERTIFICATE_FILE), &Certificate::of(d))?;
    Ok(paths)
}

/// Checks a certificate and summands against the original presentation.
pub fn verify_artifacts(
    original: &GradedMatrix,
    summands: &[GradedMatrix],
    cert: &Certificate,
) -> Result<(), ArtifactError> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(ArtifactError::Schema(cert.schema_version));
    }
    if cert.field != original.field() {
        return Err(ArtifactError::FieldMismatch { expected: cert.field.q(), got: original.field().q() });
    }
    if cert.summands.len() != summands.len() {
        return Err(ArtifactError::SummandCount { expected: cert.summands.len(), got: summands.len() });
    }
    let input = if cert.minimized { minimize(original).matrix } else { original.clone() };
    let d = Decomposition {
        input,
        removed: None,
        strategy: Strategy::Exhaustive,
        summands: cert
            .summands
            .iter()
            .zip(summands)
            .map(|(part, m)| Summand {
                rows: part.rows.clone(),
                cols: part.cols.clone(),
                matrix: m.clone(),
                interval: None,
            })
            .collect(),
        q: cert.q.clone(),
        p: cert.p.clone(),
        stats: Stats::default(),
        timings: Default::default(),
    };
    check_summand_shapes(&d)?;
    verify(&d)?;
    Ok(())
}

fn check_summand_shapes(d: &Decomposition) -> Result<(), CertificateError> {
    for s in &d.summands {
        if s.matrix.num_rows() != s.rows.len() || s.matrix.num_cols() != s.cols.len() || s.matrix.dim() != d.input.dim()
        {
            return Err(CertificateError::Size { which: "summand" });
        }
    }
    Ok(())
}

/// Reads a run directory written by [`write_artifacts`] and checks it.
pub fn verify_dir(original: &GradedMatrix, dir: &Path) -> Result<(), ArtifactError> {
    let cert: Certificate = read_json(&dir.join(CERTIFICATE_FILE))?;
    let summands = (0..cert.summands.len())
        .map(|i| read_scc(&dir.join(summand_file_name(i)), cert.field))
        .collect::<Result<Vec<_>, _>>()?;
    verify_artifacts(original, &summands, &cert)
}
