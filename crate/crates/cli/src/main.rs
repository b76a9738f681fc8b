//! Command-line front end: reads tensors in the text format, runs the
//! classification / spectral / monotonicity pipelines, and emits
//! human-readable or JSON reports.
//!
//! Exit codes: 0 success, 2 parse error, 3 undecidable spectral bracket,
//! 4 domain violation. Randomized searches use the ChaCha8 generator seeded
//! from `--seed`, so reported witnesses are reproducible across platforms.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use mtensor::{
    classify_h_with, classify_m_with, falsify_monotone, is_z_tensor, kron_identity,
    monotone_family, monotone_probes, read_tensor_file, semi_positive_certificate,
    spectral_radius, write_tensor_file, ClassifyError, IoError, MonotoneError, SpectralError,
    Tensor64, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

const EXIT_PARSE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(name = "mtensor", version, about = "Tensor classification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a tensor file: order, dimension, entry count, Z flag,
    /// diagonal signs.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify through the M pipeline (Z-tensors) and the H pipeline
    /// (any tensor, via its comparison tensor).
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral radius of a nonnegative tensor with a certified bracket.
    Rho {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Semi-positivity certificate of a nonsingular M-tensor.
    Certificate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monotonicity probes plus randomized falsification.
    Monotone {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated tensor in the text format.
    Examples {
        #[command(subcommand)]
        which: ExampleKind,
    },
}

#[derive(Subcommand)]
enum ExampleKind {
    /// `sI - I_n ⊗ I_n`: nonsingular M-tensor (for s > n) that is not
    /// monotone.
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// `sI - (a^{[2k-1]} bᵀ) ⊗ (b bᵀ)^{k-1}`: monotone nonsingular M-tensor
    /// for s > (bᵀa)^{2k-1}. Vectors are comma-separated.
    MonotoneFamily {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// `I_n ⊗ I_n` itself.
    KronIdentity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<MonotoneError> for Failure {
    fn from(e: MonotoneError) -> Self {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<mtensor::TensorError> for Failure {
    fn from(e: mtensor::TensorError) -> Self {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn diag_summary(diag: &[f64]) -> &'static str {
    if diag.iter().all(|&d| d > 0.0) {
        "diag>0"
    } else if diag.iter().all(|&d| d >= 0.0) {
        "diag>=0"
    } else {
        "diag has negative entries"
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Info { file, json, out } => {
            let t: Tensor64 = read_tensor_file(&file)?;
            let diag = t.diagonal();
            let z = is_z_tensor(&t);
            let text = if json {
                to_json(&json!({
                    "order": t.order(),
                    "dim": t.dim(),
                    "nnz": t.nnz(),
                    "is_z": z,
                    "diagonal": diag,
                }))
            } else {
                format!(
                    "m={} n={} nnz={} Z={} {}",
                    t.order(),
                    t.dim(),
                    t.nnz(),
                    if z { "yes" } else { "no" },
                    diag_summary(&diag)
                )
            };
            emit(text, out.as_ref())?;
            Ok(0)
        }
        Command::Classify {
            file,
            tol,
            max_iter,
            json,
            out,
        } => {
            let t: Tensor64 = read_tensor_file(&file)?;
            let z = is_z_tensor(&t);
            let m_verdict = if z {
                Some(classify_m_with(&t, tol, max_iter)?)
            } else {
                None
            };
            let h_verdict = classify_h_with(&t, tol, max_iter)?;
            let undecided = m_verdict.as_ref().map_or(false, |v| !v.decided)
                || !h_verdict.comparison.decided;
            let text = if json {
                to_json(&json!({
                    "input": file,
                    "is_z": z,
                    "m": m_verdict,
                    "h": h_verdict,
                }))
            } else {
                let mut lines = Vec::new();
                match &m_verdict {
                    Some(v) => lines.push(format!(
                        "M-classification: {} (margin {:.6e}, rho bracket [{:.6e}, {:.6e}])",
                        v.category, v.margin, v.rho_bracket.0, v.rho_bracket.1
                    )),
                    None => lines.push("M-classification: skipped (not a Z-tensor)".into()),
                }
                lines.push(format!(
                    "H-classification: {} (comparison margin {:.6e})",
                    h_verdict.category, h_verdict.comparison.margin
                ));
                if undecided {
                    lines.push("warning: spectral bracket too wide to decide".into());
                }
                lines.join("\n")
            };
            emit(text, out.as_ref())?;
            Ok(if undecided { EXIT_UNDECIDED } else { 0 })
        }
        Command::Rho {
            file,
            tol,
            max_iter,
            json,
            out,
        } => {
            let t: Tensor64 = read_tensor_file(&file)?;
            let result = spectral_radius(&t, tol, max_iter)?;
            let text = if json {
                to_json(&result)
            } else {
                format!(
                    "rho = {:.12e} (bracket [{:.12e}, {:.12e}], {} iterations, converged: {})",
                    result.rho, result.lower, result.upper, result.iterations, result.converged
                )
            };
            emit(text, out.as_ref())?;
            Ok(if result.converged { 0 } else { EXIT_UNDECIDED })
        }
        Command::Certificate {
            file,
            tol,
            json,
            out,
        } => {
            let t: Tensor64 = read_tensor_file(&file)?;
            let cert = semi_positive_certificate(&t, tol)?;
            let text = if json {
                to_json(&cert)
            } else {
                format!(
                    "semi-positive certificate: x = {:?}, min residual = {:.6e}",
                    cert.x, cert.margin
                )
            };
            emit(text, out.as_ref())?;
            Ok(0)
        }
        Command::Monotone {
            file,
            trials,
            seed,
            tol,
            json,
            out,
        } => {
            let t: Tensor64 = read_tensor_file(&file)?;
            let witness = falsify_monotone(&t, trials, seed);
            let refuted = witness.is_some();
            let text = match monotone_probes(&t, tol) {
                Ok(mut report) => {
                    report.witness = witness;
                    let refuted = refuted || report.refuted_by_probe();
                    if json {
                        to_json(&report)
                    } else {
                        format!(
                            "probes pass: {}; witness found: {}; assessment: {}",
                            report.probes_pass,
                            report.witness.is_some(),
                            if refuted { "not monotone" } else { "consistent with monotone" }
                        )
                    }
                }
                // probes need an even-order Z-tensor; fall back to the
                // falsification result alone
                Err(e @ (MonotoneError::OddOrder(_) | MonotoneError::NotZTensor)) => {
                    if json {
                        to_json(&json!({
                            "probe_error": e.to_string(),
                            "witness": witness,
                        }))
                    } else {
                        format!(
                            "probes not applicable ({e}); witness found: {}",
                            witness.is_some()
                        )
                    }
                }
                Err(e) => return Err(e.into()),
            };
            emit(text, out.as_ref())?;
            Ok(0)
        }
        Command::Examples { which } => {
            let (tensor, out) = match which {
                ExampleKind::Counterexample { n, s, out } => {
                    let (a, _, _) = mtensor::counterexample(n, s, 0.5)?;
                    (a, out)
                }
                ExampleKind::MonotoneFamily { a, b, k, s, out } => {
                    let av = parse_vector(&a)?;
                    let bv = parse_vector(&b)?;
                    (monotone_family(&av, &bv, k, s)?, out)
                }
                ExampleKind::KronIdentity { n, out } => (kron_identity(n)?, out),
            };
            write_tensor_file(&tensor, &out)?;
            println!(
                "wrote m={} n={} nnz={} to {}",
                tensor.order(),
                tensor.dim(),
                tensor.nnz(),
                out.display()
            );
            Ok(0)
        }
    }
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Failure::new(EXIT_DOMAIN, format!("bad vector component `{tok}`")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
