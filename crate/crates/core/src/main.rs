use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use parabolic_index::cli::{run, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    let out = run(&args);
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    ExitCode::from(out.code as u8)
}
