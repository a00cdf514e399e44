//! Command-line front end: parses flags (optionally merged with a TOML file),
//! runs one analysis and writes deterministic CSV/JSON/SVG artifacts.

use std::path::Path;

use clap::Parser;
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod format;

use config::{Cli, Format, RunConfig, WORKERS_ENV};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments, `--help` and `--version`, as reported by clap.
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("error: {flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("computation failed: {0}\nhint: retry with a smaller --m, a coarser --grid or a looser --tol")]
    Compute(vanseq::Error),
    #[error("error: cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage { .. } => 2,
            CliError::Compute(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(CliError::Usage {
                flag: WORKERS_ENV.into(),
                message: format!("expected a positive integer, got {v:?}"),
            })
        }
    };
    // A second call in the same process (tests) keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Runs and returns the rendered artifacts, for embedding and tests.
pub fn run_to_strings(argv: &[String]) -> Result<(RunConfig, Vec<(Format, String)>, String), CliError> {
    let cli = Cli::try_parse_from(argv)?;
    configure_workers()?;
    let (cfg, resolved) = RunConfig::from_cli(cli)?;
    let out = commands::execute(&cfg, &resolved)?;
    let mut artifacts = Vec::new();
    for &f in &cfg.out {
        let text = match f {
            Format::Csv => out.csv.render(&cfg),
            Format::Json => {
                let doc = format::json_doc(&cfg, out.json.clone());
                serde_json::to_string_pretty(&doc).expect("json serializes") + "\n"
            }
            Format::Svg => out.svg.clone().ok_or_else(|| CliError::Usage {
                flag: "--out".into(),
                message: format!("svg is not available for {}", cfg.command.name()),
            })?,
        };
        artifacts.push((f, text));
    }
    Ok((cfg, artifacts, out.summary))
}

/// Entry point: returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    match run_inner(argv) {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn run_inner(argv: &[String]) -> Result<(), CliError> {
    let (cfg, artifacts, summary) = run_to_strings(argv)?;
    match &cfg.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
            for (f, text) in &artifacts {
                write_file(&dir.join(format!("{}.{}", cfg.command.name(), f.extension())), text)?;
            }
            println!("{summary}");
        }
        None => {
            for (_, text) in &artifacts {
                print!("{text}");
            }
            eprintln!("{summary}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let compute = CliError::Compute(vanseq::Error::TruncationExhausted { truncation: 1 << 14 });
        assert_eq!(compute.exit_code(), 3);
        assert!(compute.to_string().contains("retry"));
        let usage = CliError::Usage { flag: "--m".into(), message: "bad".into() };
        assert_eq!(usage.exit_code(), 2);
        assert_eq!(usage.to_string(), "error: --m: bad");
    }

    #[test]
    fn run_to_strings_renders_requested_formats() {
        let argv: Vec<String> = ["vanseq", "dims", "--model", "p1:2", "--m", "1", "--val", "ordflag", "--out", "json,csv"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (cfg, arts, summary) = run_to_strings(&argv).unwrap();
        assert_eq!(cfg.m, vec![1]);
        assert_eq!(arts.iter().map(|a| a.0).collect::<Vec<_>>(), vec![Format::Csv, Format::Json]);
        assert!(summary.starts_with("dims:"));
    }
}
