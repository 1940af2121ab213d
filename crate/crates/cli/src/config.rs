//! Command-line parsing and validation.

use std::fmt;
use std::path::PathBuf;

use certjulia_core::render::{Budgets, GOLDEN_MAX_INDEX};
use certjulia_core::{Dyadic, PolynomialOracle, RotationAngle};

/// Largest accepted precision index.
pub const MAX_M: u32 = 30;
/// Precision index used by `points` when `-m` is absent.
pub const DEFAULT_POINTS_M: u32 = 7;

pub const USAGE: &str = "\
usage:
  certjulia render --poly STR -m INT --out PATH [--bitmap PATH] [--max-k INT] [--max-period INT] [--max-depth INT] [--workers INT]
  certjulia points --poly STR --max-period INT [-m INT] [--out PATH] [--workers INT]
  certjulia siegel-render --rho DYADIC -m INT --out PATH [--poly STR] [--bitmap PATH] [--max-k INT] [--max-depth INT] [--workers INT]
  certjulia siegel-estimate --n INT [--out PATH]
  certjulia escape --poly STR [--out PATH]

polynomials are coefficient lists a_0,a_1,...,a_d; each coefficient is a
dyadic (-2, 0.25, 3*2^-5), a fraction (1/3), a complex value (1+2i), or,
as a_1 of a quadratic, `golden` or `rot(THETA)`.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Render,
    Points,
    SiegelRender,
    SiegelEstimate,
    Escape,
}

impl Subcommand {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "render" => Subcommand::Render,
            "points" => Subcommand::Points,
            "siegel-render" => Subcommand::SiegelRender,
            "siegel-estimate" => Subcommand::SiegelEstimate,
            "escape" => Subcommand::Escape,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Render => "render",
            Subcommand::Points => "points",
            Subcommand::SiegelRender => "siegel-render",
            Subcommand::SiegelEstimate => "siegel-estimate",
            Subcommand::Escape => "escape",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Subcommand::Render => &["--poly", "-m", "--out"],
            Subcommand::Points => &["--poly", "--max-period"],
            Subcommand::SiegelRender => &["--rho", "-m", "--out"],
            Subcommand::SiegelEstimate => &["--n"],
            Subcommand::Escape => &["--poly"],
        }
    }

    fn allowed(self) -> &'static [&'static str] {
        match self {
            Subcommand::Render => &[
                "--poly",
                "-m",
                "--out",
                "--bitmap",
                "--max-k",
                "--max-period",
                "--max-depth",
                "--workers",
            ],
            Subcommand::Points => &["--poly", "--max-period", "-m", "--out", "--workers"],
            Subcommand::SiegelRender => &[
                "--rho",
                "-m",
                "--out",
                "--poly",
                "--bitmap",
                "--max-k",
                "--max-depth",
                "--workers",
            ],
            Subcommand::SiegelEstimate => &["--n", "--out", "--workers"],
            Subcommand::Escape => &["--poly", "--out"],
        }
    }
}

const KNOWN_FLAGS: &[&str] = &[
    "--poly",
    "-m",
    "--max-k",
    "--max-period",
    "--max-depth",
    "--rho",
    "--n",
    "--out",
    "--bitmap",
    "--workers",
];

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Subcommand,
    /// The descriptor as given, when the command takes a polynomial.
    pub poly_desc: Option<String>,
    pub poly: Option<PolynomialOracle>,
    pub m: Option<u32>,
    pub budgets: Budgets,
    pub out: Option<PathBuf>,
    pub bitmap: Option<PathBuf>,
    pub workers: usize,
    pub rho: Option<Dyadic>,
    pub angle: Option<RotationAngle>,
    pub n: Option<u32>,
}

/// Every problem found in an invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub violations: Vec<String>,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for UsageError {}

fn parse_count(flag: &str, value: &str, min: u64, max: u64, errs: &mut Vec<String>) -> Option<u64> {
    match value.parse::<u64>() {
        Ok(v) if (min..=max).contains(&v) => Some(v),
        Ok(v) => {
            errs.push(format!("{flag} must lie in {min}..={max}, got {v}"));
            None
        }
        Err(_) => {
            errs.push(format!("{flag} expects an integer, got `{value}`"));
            None
        }
    }
}

/// Parses `argv` (without the program name) into a validated config.
pub fn parse_config<S: AsRef<str>>(argv: &[S]) -> Result<RunConfig, UsageError> {
    let mut errs = Vec::new();
    let mut args = argv.iter().map(|s| s.as_ref()).peekable();
    let command = match args.next() {
        Some(s) => Subcommand::parse(s).or_else(|| {
            errs.push(format!("unknown subcommand `{s}`"));
            None
        }),
        None => {
            errs.push("missing subcommand".into());
            None
        }
    };

    let mut given: Vec<(&str, &str)> = Vec::new();
    while let Some(flag) = args.next() {
        if !KNOWN_FLAGS.contains(&flag) {
            errs.push(format!("unknown flag `{flag}`"));
            // Skip its value so it is not reported as a second flag.
            if args.peek().is_some_and(|v| !v.starts_with("--")) {
                args.next();
            }
            continue;
        }
        match args.next() {
            Some(v) if !KNOWN_FLAGS.contains(&v) => {
                if given.iter().any(|(f, _)| *f == flag) {
                    errs.push(format!("{flag} given more than once"));
                }
                given.push((flag, v));
            }
            _ => errs.push(format!("{flag} needs a value")),
        }
    }
    let Some(command) = command else {
        return Err(UsageError { violations: errs });
    };
    for (flag, _) in &given {
        if !command.allowed().contains(flag) {
            errs.push(format!("{flag} is not accepted by {}", command.name()));
        }
    }
    for flag in command.required() {
        if !given.iter().any(|(f, _)| f == flag) {
            errs.push(format!("{} requires {flag}", command.name()));
        }
    }
    let get = |flag: &str| given.iter().find(|(f, _)| *f == flag).map(|(_, v)| *v);

    let m = get("-m").and_then(|v| parse_count("-m", v, 1, MAX_M as u64, &mut errs)).map(|v| v as u32);
    let mut budgets = Budgets::for_precision(m.unwrap_or(1));
    if let Some(v) = get("--max-k").and_then(|v| parse_count("--max-k", v, 1, 4096, &mut errs)) {
        budgets.max_k = v as u32;
    }
    let max_period = get("--max-period").and_then(|v| parse_count("--max-period", v, 1, 64, &mut errs));
    if let Some(v) = max_period {
        budgets.max_period = v as u32;
    }
    if let Some(v) = get("--max-depth").and_then(|v| parse_count("--max-depth", v, 1, 40, &mut errs)) {
        budgets.max_depth = v as u32;
    }
    let workers = get("--workers")
        .and_then(|v| parse_count("--workers", v, 1, 1024, &mut errs))
        .map(|v| v as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let n = get("--n")
        .and_then(|v| parse_count("--n", v, 1, GOLDEN_MAX_INDEX as u64, &mut errs))
        .map(|v| v as u32);

    let poly_desc = get("--poly").map(str::to_string).or_else(|| {
        (command == Subcommand::SiegelRender).then(|| "0,golden,1".to_string())
    });
    let poly = poly_desc.as_deref().and_then(|d| match PolynomialOracle::parse(d) {
        Ok(p) => Some(p),
        Err(e) => {
            errs.push(format!("--poly: {e}"));
            None
        }
    });
    let mut angle = None;
    if command == Subcommand::SiegelRender {
        if let Some(p) = &poly {
            angle = p.siegel_angle();
            if angle.is_none() {
                errs.push("siegel-render needs --poly of the form 0,golden,1 or 0,rot(THETA),1".into());
            }
        }
    }

    let rho = get("--rho").and_then(|v| match v.parse::<Dyadic>() {
        Ok(r) if r.is_positive() && r < Dyadic::one() => Some(r),
        Ok(_) => {
            errs.push(format!("--rho must lie strictly between 0 and 1, got {v}"));
            None
        }
        Err(_) => {
            errs.push(format!("--rho expects a dyadic number, got `{v}`"));
            None
        }
    });

    if !errs.is_empty() {
        return Err(UsageError { violations: errs });
    }
    Ok(RunConfig {
        command,
        poly_desc,
        poly,
        m,
        budgets,
        out: get("--out").map(PathBuf::from),
        bitmap: get("--bitmap").map(PathBuf::from),
        workers,
        rho,
        angle,
        n,
    })
}
