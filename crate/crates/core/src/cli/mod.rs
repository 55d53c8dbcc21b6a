//! Command-line front end: argument handling, batch evaluation and output
//! formatting.

pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::spectrum::Bundle;
pub use config::{parse_config, serialize_data, serialize_document, ConfigError, Document};
pub use report::{run_report, Command, RunConfig, TGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BundleArg {
    #[value(name = "E")]
    E,
    #[value(name = "End")]
    End,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "parabolic-index", version, about = "Invariants of parabolic weight systems on punctured surfaces")]
pub struct Args {
    /// JSON input file, or `-` for stdin.
    #[arg(long, conflicts_with = "doc", required_unless_present = "doc")]
    pub input: Option<PathBuf>,
    /// Inline JSON input document.
    #[arg(long)]
    pub doc: Option<String>,
    /// validate, spectrum, eta, index, dimension, curvature, heat or detmodel.
    #[arg(long, value_parser = parse_command)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "E")]
    pub bundle: BundleArg,
    /// Eigenvalue window bound for `spectrum`.
    #[arg(long, default_value_t = 20.0)]
    pub window: f64,
    /// Truncation degree of graded classes.
    #[arg(long, default_value_t = 2)]
    pub degree_cap: u32,
    /// Absolute tolerance for numeric routes.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// START:STOP:POINTS, log spaced.
    #[arg(long, value_parser = parse_t_grid, default_value = "1e-4:1e-1:24")]
    pub t_grid: TGrid,
    /// Restrict to one puncture (0-based).
    #[arg(long)]
    pub puncture: Option<usize>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    Command::parse(s).ok_or_else(|| {
        let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        format!("unknown command {s:?}; expected one of {}", names.join(", "))
    })
}

fn parse_t_grid(s: &str) -> Result<TGrid, String> {
    TGrid::parse(s).ok_or_else(|| format!("bad t-grid {s:?}; expected START:STOP:POINTS with 0 < START < STOP"))
}

impl Args {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            command: self.command,
            bundle: match self.bundle {
                BundleArg::E => Bundle::E,
                BundleArg::End => Bundle::End,
            },
            window: self.window,
            degree_cap: self.degree_cap,
            tol: self.tol,
            t_grid: self.t_grid,
            puncture: self.puncture,
        }
    }
}

/// Everything the process writes, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn read_input(args: &Args) -> Result<String, ConfigError> {
    if let Some(doc) = &args.doc {
        return Ok(doc.clone());
    }
    let path = args.input.as_ref().expect("clap requires input or doc");
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| ConfigError::Io(e.to_string()))
    } else {
        std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
    }
}

pub fn run(args: &Args) -> Outcome {
    let doc = match read_input(args).and_then(|t| parse_config(&t)) {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: e.exit_code(),
            }
        }
    };
    let cfg = args.run_config();
    if cfg.tol <= 0.0 || !cfg.tol.is_finite() {
        return Outcome {
            stdout: String::new(),
            stderr: format!("error: --tol must be positive, got {}\n", cfg.tol),
            code: 2,
        };
    }
    let results: Vec<_> = doc.entries().par_iter().map(|d| run_report(d, &cfg)).collect();

    match doc {
        Document::Single(_) => match results.into_iter().next().expect("one entry") {
            Ok(report) => Outcome {
                stdout: render(&[report], args.format, cfg.command, false),
                stderr: String::new(),
                code: 0,
            },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: {} ({})\n", e, e.kind()),
                code: e.exit_code(),
            },
        },
        Document::Batch(_) => {
            let mut code = 0;
            let mut stderr = String::new();
            let reports: Vec<Value> = results
                .into_iter()
                .enumerate()
                .map(|(i, r)| match r {
                    Ok(v) => v,
                    Err(e) => {
                        code = code.max(e.exit_code());
                        stderr.push_str(&format!("error: entry {i}: {} ({})\n", e, e.kind()));
                        json!({"error": {"kind": e.kind(), "message": e.to_string()}})
                    }
                })
                .collect();
            Outcome {
                stdout: render(&reports, args.format, cfg.command, true),
                stderr,
                code,
            }
        }
    }
}

fn render(reports: &[Value], format: Format, cmd: Command, batch: bool) -> String {
    match format {
        Format::Json => {
            let v = if batch { Value::Array(reports.to_vec()) } else { reports[0].clone() };
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                let mut rows = Vec::new();
                report::flatten("", r, &mut rows);
                for row in rows {
                    if batch {
                        out.push_str(&format!("[{i}] "));
                    }
                    out.push_str(&format!("{} = {}\n", row[0], row[1]));
                }
            }
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header_done = false;
            for (i, r) in reports.iter().enumerate() {
                let (header, rows) = if r.get("error").is_some() {
                    let mut rows = Vec::new();
                    report::flatten("", r, &mut rows);
                    (vec!["key".to_string(), "value".to_string()], rows)
                } else {
                    report::csv_rows(r, cmd)
                };
                if !header_done {
                    let mut h = header;
                    if batch {
                        h.insert(0, "entry".into());
                    }
                    w.write_record(&h).expect("in-memory write");
                    header_done = true;
                }
                for mut row in rows {
                    if batch {
                        row.insert(0, i.to_string());
                    }
                    w.write_record(&row).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}
