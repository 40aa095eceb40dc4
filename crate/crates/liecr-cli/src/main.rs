//! `liecr`: construct and verify complex/CR/nacs structures on compact Lie
//! groups from Abelian-action data.
//!
//! Exit codes: 0 = all requested checks passed, 1 = a verification failed,
//! 2 = input error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use liecr::error::Error;
use liecr::pipeline::{
    cmd_build, cmd_describe, cmd_su2_action, OutputFormat, PipelineConfig, RunReport,
};
use liecr::tol::DEFAULT_BASE_TOLERANCE;

#[derive(Debug, Parser)]
#[command(name = "liecr", version, about = "complex and CR structures on compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Base tolerance for all rank and residual decisions; the environment
    /// variable LIECR_TOLERANCE overrides the default when the flag is absent.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Seed for all randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    output: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions, rank, torus, roots and Borel data of an algebra.
    Describe {
        /// Built-in name (su2, su3, su4, so3, u1) or algebra-spec JSON path.
        algebra: String,
    },
    /// Run the transversality conditions, build the invariant pair, verify.
    Build {
        /// Built-in name or algebra-spec JSON path.
        algebra: String,
        /// Morphism matrix: inline row-major [[re, im], ...] or a
        /// morphism-spec JSON path.
        #[arg(long = "M")]
        morphism: String,
        /// Checks to run: cr, nacs, solvable, borel.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Run every applicable check.
        #[arg(long)]
        all: bool,
    },
    /// Analyze the SU(2) action family Lambda(t) = (e^{at}, e^{bt}).
    Su2Action {
        /// Complex parameter a: `re`, `re+imi`, or `[re,im]`.
        #[arg(long)]
        a: String,
        /// Complex parameter b.
        #[arg(long)]
        b: String,
        /// Fiber radii to sample.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        radii: Vec<f64>,
        /// Sample points per sphere.
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

/// Accepts `re`, `re+imi` / `re-imi` / `i` / `-i`, or `[re,im]`.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if t.starts_with('[') {
        let pair: Vec<f64> = serde_json::from_str(t)
            .map_err(|e| format!("expected [re,im]: {e}"))?;
        if pair.len() != 2 {
            return Err(format!("expected two components, got {}", pair.len()));
        }
        return Ok(Complex64::new(pair[0], pair[1]));
    }
    if !t.ends_with('i') && !t.ends_with('I') {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad real literal '{t}': {e}"));
    }
    // trailing-i forms: i, -i, 2i, 1+2i, 0.5-0.25i
    let body = &t[..t.len() - 1];
    // split at the last +/- that is not an exponent sign and not leading
    let mut split_at = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if ch == '+' || ch == '-' {
            let prev = body.as_bytes()[idx - 1] as char;
            if prev != 'e' && prev != 'E' {
                split_at = Some(idx);
            }
        }
    }
    let (re_part, im_part) = match split_at {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let re: f64 = if re_part.is_empty() {
        0.0
    } else {
        re_part
            .parse()
            .map_err(|e| format!("bad real part '{re_part}': {e}"))?
    };
    let im: f64 = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .map_err(|e| format!("bad imaginary part '{other}': {e}"))?,
    };
    Ok(Complex64::new(re, im))
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("LIECR_TOLERANCE") {
        Ok(text) => text
            .parse::<f64>()
            .map_err(|e| format!("LIECR_TOLERANCE is not a number: {e}")),
        Err(_) => Ok(DEFAULT_BASE_TOLERANCE),
    }
}

fn parse_output(text: &str) -> Result<OutputFormat, String> {
    match text {
        "json" => Ok(OutputFormat::Json),
        "text" => Ok(OutputFormat::Text),
        other => Err(format!("unknown output format '{other}' (json|text)")),
    }
}

fn emit(report: &RunReport) {
    match report.config.output {
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("report serializes")
            );
        }
        OutputFormat::Text => print!("{}", report.render_text()),
    }
}

fn exit_for(report: &RunReport) -> ExitCode {
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn classify(e: Error) -> ExitCode {
    match e {
        Error::Numerical(ref msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        other => input_error(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tolerance = match resolve_tolerance(cli.common.tolerance) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let output = match parse_output(&cli.common.output) {
        Ok(o) => o,
        Err(e) => return input_error(e),
    };
    let seed = cli.common.seed;

    match cli.command {
        Command::Describe { algebra } => {
            let config = PipelineConfig {
                algebra: Some(algebra),
                morphism: None,
                checks: vec!["describe".into()],
                tolerance,
                output,
                seed,
            };
            match cmd_describe(config) {
                Ok(report) => {
                    emit(&report);
                    exit_for(&report)
                }
                Err(e) => classify(e),
            }
        }
        Command::Build {
            algebra,
            morphism,
            checks,
            all,
        } => {
            let checks = if all || checks.is_empty() {
                vec!["all".into()]
            } else {
                checks
            };
            let config = PipelineConfig {
                algebra: Some(algebra),
                morphism: Some(morphism),
                checks,
                tolerance,
                output,
                seed,
            };
            match cmd_build(config) {
                Ok(report) => {
                    emit(&report);
                    exit_for(&report)
                }
                Err(e) => classify(e),
            }
        }
        Command::Su2Action {
            a,
            b,
            radii,
            samples,
        } => {
            let a = match parse_complex(&a) {
                Ok(v) => v,
                Err(e) => return input_error(format!("--a: {e}")),
            };
            let b = match parse_complex(&b) {
                Ok(v) => v,
                Err(e) => return input_error(format!("--b: {e}")),
            };
            let config = PipelineConfig {
                algebra: None,
                morphism: None,
                checks: vec!["su2-action".into()],
                tolerance,
                output,
                seed,
            };
            match cmd_su2_action(config, a, b, radii, samples) {
                Ok(report) => {
                    emit(&report);
                    exit_for(&report)
                }
                Err(e) => classify(e),
            }
        }
        Command::Selftest { criteria } => {
            let tol = liecr::Tolerances::from_base(tolerance);
            let results = if criteria.is_empty() {
                liecr::acceptance::run_all(&tol, seed)
            } else {
                liecr::acceptance::run_selected(&tol, seed, &criteria)
            };
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                all_pass &= r.pass;
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
