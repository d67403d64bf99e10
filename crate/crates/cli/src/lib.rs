//! Command-line surface: `construct`, `verify`, `distance`, `bounds`, `export`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
//! parse error.

pub mod codefile;
pub mod verify;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rsconcat::bounds::{delta_curve, rate_grid, write_csv, BoundCurve, CurveName, CurveParams};
use rsconcat::concat::build_code;
use rsconcat::distance::{exact_distance_in, sampled_distance_in, CosetBasis, DistanceError};
use rsconcat::symplectic::verify_duality;
use thiserror::Error;

use crate::codefile::{CodeFile, CodeFileError};
use crate::verify::verify_code_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rsconcat", version, about = "Concatenated quantum Reed-Solomon stabilizer codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build L_{N,K} and write its code file.
    Construct {
        #[arg(long)]
        m: usize,
        #[arg(long = "K")]
        big_k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check duality, containment, ranks, canonical rows and block injectivity.
    Verify {
        path: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Minimum symplectic weight over N_L \ S_L (exact) or an upper bound (sample).
    Distance {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = DistanceMethod::Exact)]
        method: DistanceMethod,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parts: usize,
    },
    /// Rate/relative-distance curves as CSV.
    Bounds {
        /// ours | ours_finite_m | ashikhmin | chen | matsumoto | baseline_rs
        #[arg(long)]
        curve: String,
        /// One or more values of m (comma separated); one curve per value.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        /// One or more values of t (comma separated) for the `chen` curve.
        #[arg(long, value_delimiter = ',')]
        t: Vec<u32>,
        #[arg(long = "R-min", default_value_t = 0.0)]
        r_min: f64,
        #[arg(long = "R-max", default_value_t = 0.5)]
        r_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
    },
    /// Print every generator row (S rows, then N rows) as a Pauli string.
    Export {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Pauli)]
        format: ExportFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceMethod {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Pauli,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: CodeFileError },
    #[error("{0}")]
    Failed(String),
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::File { .. } | CliError::Output(_) => EXIT_IO,
            CliError::Failed(_) => EXIT_VERIFY_FAILED,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<CodeFile, CliError> {
    CodeFile::read(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Construct { m, big_k, out: path } => {
            let code = build_code(m, big_k).map_err(|e| CliError::Usage(e.to_string()))?;
            if big_k == 0 {
                writeln!(err, "warning: K = 0, the Reed-Solomon layer contributes no stabilizers")?;
            }
            let file = CodeFile::from_code(&code);
            file.write(&path).map_err(|e| CliError::File { path: path.clone(), source: e.into() })?;
            writeln!(out, "[[{},{}]] rank_S={} rank_N={}", code.n, code.k, code.rank_s(), code.rank_n())?;
            Ok(EXIT_OK)
        }
        Command::Verify { path, json } => {
            let report = verify_code_file(&load(&path)?);
            if json {
                serde_json::to_writer_pretty(&mut *out, &report).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                for c in &report.checks {
                    writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
                }
                writeln!(out, "verify: {}", if report.passed { "PASS" } else { "FAIL" })?;
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Distance { path, method, trials, seed, parts } => {
            let file = load(&path)?;
            let duality = verify_duality(&file.s_rows, &file.n_rows).expect("row lengths fixed by the header");
            if !duality.passed() {
                return Err(CliError::Failed(
                    "stored rows are not a dual stabilizer/normalizer pair; run `verify`".into(),
                ));
            }
            let basis = CosetBasis::from_reduced(&file.s_rows.row_reduce(), &file.n_rows.row_reduce());
            let report = match method {
                DistanceMethod::Exact => exact_distance_in(&basis, parts.max(1)),
                DistanceMethod::Sample => sampled_distance_in(&basis, trials, seed),
            };
            let report = report.map_err(|e| match e {
                DistanceError::OverBudget { .. } => {
                    CliError::Usage(format!("refusing exact enumeration: {e} (--method sample)"))
                }
                other => CliError::Usage(other.to_string()),
            })?;
            writeln!(out, "{report}")?;
            Ok(EXIT_OK)
        }
        Command::Bounds { curve, m, t, r_min, r_max, steps } => {
            let name: CurveName = curve.parse().map_err(|e: rsconcat::BoundsError| CliError::Usage(e.to_string()))?;
            if !(r_min.is_finite() && r_max.is_finite() && r_min <= r_max) || steps == 0 {
                return Err(CliError::Usage(format!("bad rate range [{r_min}, {r_max}] with {steps} steps")));
            }
            let grid = rate_grid(r_min, r_max, steps);
            let param_sets: Vec<CurveParams> = match name {
                CurveName::Ours => vec![CurveParams::default()],
                CurveName::Chen => option_list(&t).into_iter().map(|t| CurveParams { m: None, t }).collect(),
                _ => option_list(&m).into_iter().map(|m| CurveParams { m, t: None }).collect(),
            };
            let curves = param_sets
                .into_iter()
                .map(|p| delta_curve(name, p, &grid))
                .collect::<Result<Vec<BoundCurve<f64>>, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            for c in &curves {
                if !c.omitted.is_empty() {
                    writeln!(
                        err,
                        "note: {} [{}]: {} of {} rates outside the curve's domain omitted",
                        c.name,
                        c.params_label(),
                        c.omitted.len(),
                        grid.len()
                    )?;
                }
            }
            write_csv(out, &curves)?;
            Ok(EXIT_OK)
        }
        Command::Export { path, format: ExportFormat::Pauli } => {
            let file = load(&path)?;
            for row in file.s_rows.rows().iter().chain(file.n_rows.rows()) {
                writeln!(out, "{}", row.to_pauli_string())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn option_list(values: &[u32]) -> Vec<Option<u32>> {
    if values.is_empty() {
        vec![None]
    } else {
        values.iter().copied().map(Some).collect()
    }
}
