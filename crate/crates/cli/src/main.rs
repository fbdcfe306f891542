use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use kwavelet::{Error, ErrorClass};

mod commands;
mod output;

/// Wavelet analysis on finite higher-rank graphs.
#[derive(Parser, Debug)]
#[command(name = "kwavelet", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// k-graph document; bundled fixture names (e.g. ledrappier.kg) also work.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Emit numeric tables as CSV instead of JSON lines.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Override the command's main tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load a graph and report its shape.
    Validate {
        /// Graph document; defaults to --graph.
        file: Option<PathBuf>,
        /// Also print the canonical graph document.
        #[arg(long)]
        emit: bool,
    },
    /// Spectral radii, Perron-Frobenius vector and Hausdorff dimension.
    Pf {
        /// Print the eigenvector as exact fractions.
        #[arg(long)]
        exact: bool,
    },
    /// Cylinder measures of paths.
    Measure(commands::MeasureArgs),
    /// Check the Cuntz-Krieger relations on cylinder levels.
    CkCheck(commands::CkArgs),
    /// Rectangular path-space wavelets.
    Wavelets(commands::WaveletArgs),
    /// Wavelets for a Bernoulli measure on the full shift.
    Markov(commands::MarkovArgs),
    /// Vertex wavelets from preferred paths.
    Traffic(commands::TrafficArgs),
    /// Incidence matrices and the Laplacian.
    Laplacian,
    /// Laplacian eigendata, Fourier transform and spectral wavelets.
    Spectral(commands::SpectralArgs),
}

pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            kind: "usage".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Parse => 2,
            ErrorClass::Validation => 3,
            ErrorClass::Numeric => 4,
        };
        CliError {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn class_name(code: u8) -> &'static str {
    match code {
        2 => "parse",
        3 => "validation",
        4 => "numeric",
        _ => "usage",
    }
}

fn fail(err: CliError) -> ExitCode {
    let record = json!({
        "error": err.kind,
        "class": class_name(err.code),
        "message": err.message,
    });
    eprintln!("{record}");
    ExitCode::from(err.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail(CliError::usage(e.to_string().trim_end()));
        }
    };
    let out = match commands::run(&cli) {
        Ok(out) => out,
        Err(e) => return fail(e),
    };
    let text = match out.render(cli.global.csv) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let written = match &cli.global.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::usage(e.to_string())),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
