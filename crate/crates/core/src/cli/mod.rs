//! Command-line driver: read or generate a vector stream, sketch it, and
//! write a JSON bound report plus an optional `FDC1` snapshot.

pub mod input;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::oracle::{BoundReport, BoundRow, ProofStepReport, TrackedStream};
use crate::sketch::{Batch, FdSketch};
use crate::stream::{Family, Generator};

use input::{BinaryReader, TextReader};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: vector has dimension {found}, expected {expected}")]
    DimensionChange {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("binary input: {0}")]
    Binary(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Sketch(#[from] crate::Error),

    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Text,
    Binary,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fdcov", version, about = "Frequent Directions covariance sketch")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "generate"])))]
pub struct Args {
    /// Vector stream to read.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Synthetic stream instead of a file: gaussian, low-rank, rotations, repeated.
    #[arg(long, value_name = "MODE")]
    pub generate: Option<Family>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: InputFormat,

    /// Consecutive vectors per update.
    #[arg(long, default_value_t = 1)]
    pub batch_size: usize,

    /// Sketch parameter; the sketch keeps at most ell-1 directions.
    #[arg(long)]
    pub ell: usize,

    /// Track the exact covariance and check the error bound.
    #[arg(long)]
    pub exact: bool,

    /// Audit every inequality behind the bound (implies --exact).
    #[arg(long)]
    pub proof_steps: bool,

    /// Comma-separated k values for --proof-steps (default: all k < ell).
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,

    /// JSON report path (default: stdout).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Write the final sketch as an FDC1 snapshot.
    #[arg(long, value_name = "PATH")]
    pub snapshot: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of generated vectors.
    #[arg(long, default_value_t = 100)]
    pub count: usize,

    /// Vector dimension. Required with --generate; with --input it is
    /// checked against the data.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Signal rank for --generate low-rank.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Noise level for --generate low-rank.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum Source {
    File { path: PathBuf, format: InputFormat },
    Generate {
        family: Family,
        dim: usize,
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone)]
pub struct StreamConfig {
    pub source: Source,
    pub batch_size: usize,
    pub ell: usize,
    pub exact: bool,
    /// `Some(ks)` when the proof-step audit is requested.
    pub proof_steps: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub dim: Option<usize>,
}

impl TryFrom<Args> for StreamConfig {
    type Error = CliError;

    fn try_from(a: Args) -> Result<Self, CliError> {
        if a.batch_size == 0 {
            return Err(CliError::Config("--batch-size must be at least 1".into()));
        }
        if a.ell == 0 {
            return Err(CliError::Config("--ell must be at least 1".into()));
        }
        let source = match (a.input, a.generate) {
            (Some(path), None) => Source::File {
                path,
                format: a.format,
            },
            (None, Some(mut family)) => {
                let dim = a
                    .dim
                    .ok_or_else(|| CliError::Config("--generate requires --dim".into()))?;
                if let Family::LowRank { rank, noise } = &mut family {
                    *rank = a.rank.unwrap_or(*rank);
                    *noise = a.noise.unwrap_or(*noise);
                }
                Source::Generate {
                    family,
                    dim,
                    count: a.count,
                    seed: a.seed,
                }
            }
            _ => {
                return Err(CliError::Config(
                    "exactly one of --input or --generate is required".into(),
                ))
            }
        };
        let proof_steps = if a.proof_steps {
            Some(a.k.unwrap_or_else(|| (0..a.ell).collect()))
        } else {
            None
        };
        Ok(StreamConfig {
            source,
            batch_size: a.batch_size,
            ell: a.ell,
            exact: a.exact || a.proof_steps,
            proof_steps,
            out: a.out,
            snapshot: a.snapshot,
            dim: a.dim,
        })
    }
}

/// Top-level JSON document written by [`run`].
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    #[serde(flatten)]
    pub report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_steps: Option<Vec<ProofStepReport>>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ReportFile,
    /// 0 when every enabled check passed, 1 otherwise.
    pub exit_code: i32,
}

type VectorIter = Box<dyn Iterator<Item = Result<(usize, Vec<f64>), CliError>>>;

fn open_source(source: &Source) -> Result<VectorIter, CliError> {
    Ok(match source {
        Source::File { path, format } => {
            let file = File::open(path)?;
            match format {
                InputFormat::Text => Box::new(TextReader::new(BufReader::new(file))),
                InputFormat::Binary => Box::new(BinaryReader::new(BufReader::new(file))?),
            }
        }
        Source::Generate {
            family,
            dim,
            count,
            seed,
        } => Box::new(
            Generator::new(*family, *dim, *seed)?
                .take(*count)
                .enumerate()
                .map(|(i, v)| Ok((i + 1, v))),
        ),
    })
}

enum Pipeline {
    Plain(FdSketch<f64>),
    Tracked(TrackedStream<f64>),
}

impl Pipeline {
    fn new(dim: usize, ell: usize, exact: bool) -> Result<Self, CliError> {
        Ok(if exact {
            Pipeline::Tracked(TrackedStream::new(dim, ell)?)
        } else {
            Pipeline::Plain(FdSketch::new(dim, ell)?)
        })
    }

    fn push(&mut self, batch: &Batch<f64>) -> Result<(), CliError> {
        match self {
            Pipeline::Plain(sk) => {
                sk.update(batch)?;
            }
            Pipeline::Tracked(ts) => {
                ts.push(batch)?;
            }
        }
        Ok(())
    }

    fn sketch(&self) -> &FdSketch<f64> {
        match self {
            Pipeline::Plain(sk) => sk,
            Pipeline::Tracked(ts) => &ts.sketch,
        }
    }
}

/// Runs the whole pipeline and writes the report (and snapshot, if asked).
pub fn run(config: &StreamConfig) -> Result<RunOutcome, CliError> {
    let mut pipeline: Option<Pipeline> = None;
    let mut pending: Vec<f64> = Vec::new();
    let mut pending_cols = 0;
    let mut dim = config.dim;

    if let Some(d) = dim {
        pipeline = Some(Pipeline::new(d, config.ell, config.exact)?);
    }

    for item in open_source(&config.source)? {
        let (line, v) = item?;
        let d = match dim {
            Some(d) => d,
            None => {
                let d = v.len();
                pipeline = Some(Pipeline::new(d, config.ell, config.exact)?);
                dim = Some(d);
                d
            }
        };
        if v.len() != d {
            return Err(CliError::DimensionChange {
                line,
                expected: d,
                found: v.len(),
            });
        }
        pending.extend_from_slice(&v);
        pending_cols += 1;
        if pending_cols == config.batch_size {
            let batch = Batch::from_column_major(d, std::mem::take(&mut pending))?;
            pipeline.as_mut().unwrap().push(&batch)?;
            pending_cols = 0;
        }
    }
    if pending_cols > 0 {
        let batch = Batch::from_column_major(dim.unwrap(), pending)?;
        pipeline.as_mut().unwrap().push(&batch)?;
    }

    let report = match &pipeline {
        Some(Pipeline::Tracked(ts)) => {
            let proof_steps = match &config.proof_steps {
                Some(ks) => Some(ts.verify_proof_steps(ks)?),
                None => None,
            };
            ReportFile {
                report: ts.verify_lemma1()?,
                proof_steps,
            }
        }
        Some(Pipeline::Plain(sk)) => ReportFile {
            report: BoundReport::unverified(sk.dim(), sk.ell(), sk.steps()),
            proof_steps: None,
        },
        None => empty_stream_report(config),
    };

    if let Some(path) = &config.snapshot {
        let sketch = pipeline.as_ref().map(Pipeline::sketch).ok_or_else(|| {
            CliError::Config("cannot snapshot an empty stream without --dim".into())
        })?;
        let mut f = File::create(path)?;
        sketch.write_snapshot(&mut f)?;
    }

    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    match &config.out {
        Some(path) => std::fs::write(path, json)?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }

    let checks_pass = report.report.pass
        && report
            .proof_steps
            .as_ref()
            .is_none_or(|ps| ps.iter().all(|p| p.pass));
    Ok(RunOutcome {
        exit_code: if checks_pass { 0 } else { 1 },
        report,
    })
}

/// No vectors and no declared dimension: `C = C̃ = 0`, so every bound is 0
/// and holds trivially.
fn empty_stream_report(config: &StreamConfig) -> ReportFile {
    if !config.exact {
        return ReportFile {
            report: BoundReport::unverified(0, config.ell, 0),
            proof_steps: None,
        };
    }
    let rows = (0..config.ell)
        .map(|k| BoundRow {
            k,
            bound: 0.0,
            slack: 0.0,
            pass: true,
        })
        .collect();
    ReportFile {
        report: BoundReport {
            d: 0,
            ell: config.ell,
            steps: 0,
            measured_error: Some(0.0),
            rows,
            pass: true,
        },
        proof_steps: config.proof_steps.as_ref().map(|_| Vec::new()),
    }
}
