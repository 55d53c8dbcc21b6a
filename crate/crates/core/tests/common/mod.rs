#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use parabolic_index::parabolic::{FlagData, ParabolicData};
use parabolic_index::rational::{int, rat, Rational};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::Rng;

/// Random composition of `k` into `parts` positive integers.
pub fn composition(rng: &mut StdRng, k: u32, parts: u32) -> Vec<u32> {
    let mut cuts: Vec<u32> = sample(rng, (k - 1) as usize, (parts - 1) as usize)
        .into_iter()
        .map(|c| c as u32 + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts as usize);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(k)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Weights `j/den`, distinct and increasing, with random multiplicities summing to `k`.
pub fn random_flag(rng: &mut StdRng, k: u32, den: i64) -> FlagData {
    let levels = rng.gen_range(1..=k.min(den as u32));
    let mut nums: Vec<i64> = sample(rng, den as usize, levels as usize)
        .into_iter()
        .map(|j| j as i64)
        .collect();
    nums.sort_unstable();
    FlagData::new(
        nums.into_iter().map(|j| rat(j, den)).collect(),
        composition(rng, k, levels),
    )
}

/// Admissible data with parabolic degree zero, by rejection. Weights have
/// denominators dividing 12.
pub fn random_pardeg_zero(rng: &mut StdRng, kmax: u32, gmax: u32, nmax: u32) -> ParabolicData {
    loop {
        let k = rng.gen_range(1..=kmax);
        let g = rng.gen_range(0..=gmax);
        let n = rng.gen_range(0..=nmax);
        if 2 - 2 * g as i64 - n as i64 >= 0 {
            continue;
        }
        let flags: Vec<FlagData> = (0..n).map(|_| random_flag(rng, k, 12)).collect();
        let boundary: Rational = flags
            .iter()
            .flat_map(|f| f.levels())
            .map(|(a, m)| a * int(m as i64))
            .sum();
        if !boundary.is_integer() {
            continue;
        }
        let data = ParabolicData::try_new(g, k, -boundary.to_integer(), flags).expect("admissible");
        assert!(data.is_degree_zero());
        return data;
    }
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub struct Run {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub code: i32,
}

pub fn run_cli(input: &Path, args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_parabolic-index"))
        .arg("--input")
        .arg(input)
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn sorted_with_ext(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("fixture dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

/// Golden fixtures: `NAME.json` input, `NAME.args` (one argument per line),
/// expected `NAME.out` stdout and `NAME.code` exit status. With
/// `UPDATE_GOLDEN=1` the expectations are rewritten.
pub fn check_golden() -> Result<usize, Vec<String>> {
    let dir = fixtures().join("golden");
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut failures = Vec::new();
    let cases = sorted_with_ext(&dir, "args");
    for args_path in &cases {
        let name = args_path.file_stem().unwrap().to_string_lossy().into_owned();
        let args: Vec<String> = std::fs::read_to_string(args_path)
            .unwrap()
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        let input = dir.join(format!("{name}.json"));
        let first = run_cli(&input, &args);
        let second = run_cli(&input, &args);
        if first.stdout != second.stdout || first.code != second.code {
            failures.push(format!("{name}: output differs between runs"));
            continue;
        }
        let out_path = dir.join(format!("{name}.out"));
        let code_path = dir.join(format!("{name}.code"));
        if update {
            std::fs::write(&out_path, &first.stdout).unwrap();
            std::fs::write(&code_path, format!("{}\n", first.code)).unwrap();
            continue;
        }
        let expected = std::fs::read(&out_path).unwrap_or_default();
        let code: i32 = std::fs::read_to_string(&code_path)
            .map(|s| s.trim().parse().unwrap())
            .unwrap_or(0);
        if expected != first.stdout {
            failures.push(format!("{name}: stdout differs from {}", out_path.display()));
        }
        if code != first.code {
            failures.push(format!("{name}: exit {} (expected {code}); stderr: {}", first.code, first.stderr));
        }
    }
    if failures.is_empty() {
        Ok(cases.len())
    } else {
        Err(failures)
    }
}

/// Malformed fixtures: `NAME.json` must exit 2 and name the JSON pointer in `NAME.pointer`.
pub fn check_malformed() -> Result<usize, Vec<String>> {
    let dir = fixtures().join("malformed");
    let mut failures = Vec::new();
    let cases = sorted_with_ext(&dir, "json");
    for input in &cases {
        let name = input.file_stem().unwrap().to_string_lossy().into_owned();
        let pointer = std::fs::read_to_string(dir.join(format!("{name}.pointer")))
            .unwrap()
            .trim()
            .to_string();
        let r = run_cli(input, &["--command".into(), "validate".into()]);
        if r.code != 2 {
            failures.push(format!("{name}: exit {} (expected 2)", r.code));
        }
        if !r.stderr.contains(&format!("at {pointer}:")) {
            failures.push(format!("{name}: stderr lacks pointer {pointer}: {}", r.stderr.trim()));
        }
    }
    if failures.is_empty() {
        Ok(cases.len())
    } else {
        Err(failures)
    }
}
