//! `qrr`: list, verify and batch-check q-series identities, and run the
//! dilogarithm grid.
//!
//! Exit codes: 0 all good, 1 a mismatch (or numeric failure), 2 bad usage
//! or config, 3 an internal consistency error.

mod suite;

use clap::{Parser, Subcommand};
use qrr_core::dilog::dilog_grid;
use qrr_core::registry::{parse_rationals, ParamKind};
use qrr_core::{list_identities, verify_with, Exponent, IdentityInstance, Kind, Status, VerificationReport, VerifyOptions};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Bad flags, config or files; always exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "qrr", version, about = "Exact verification of q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List registered identities and their parameters.
    List,
    /// Verify one identity.
    Verify {
        #[arg(long)]
        id: String,
        /// Parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_pair)]
        params: Vec<(String, String)>,
        /// Number of q-coefficients to compare, counted from the leading
        /// exponent.
        #[arg(long, default_value_t = 30)]
        order: i64,
        /// Also write the report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Add c*q^e to the right side, as EXP:COEFF; checks that
        /// mismatches are caught.
        #[arg(long, hide = true, value_parser = parse_perturbation)]
        perturb_rhs: Option<(Exponent, i64)>,
    },
    /// Run a suite described by a JSON config.
    Suite {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output_path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the dilogarithm identities on a grid.
    Dilog {
        #[arg(long = "max-K", default_value_t = 8)]
        max_k: usize,
        #[arg(long = "max-N", default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected key=value, got {s:?}")),
    }
}

fn parse_perturbation(s: &str) -> Result<(Exponent, i64), String> {
    let (e, c) = s.split_once(':').ok_or_else(|| format!("expected EXP:COEFF, got {s:?}"))?;
    let e = match parse_rationals(e)?.as_slice() {
        [x] => *x,
        _ => return Err(format!("expected a single exponent, got {e:?}")),
    };
    let c = c.trim().parse().map_err(|_| format!("bad coefficient {c:?}"))?;
    Ok((e, c))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, everything else 2
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let code = match cli.command {
        Command::List => {
            list();
            Ok(0)
        }
        Command::Verify {
            id,
            params,
            order,
            json,
            perturb_rhs,
        } => {
            let options = VerifyOptions {
                perturb_rhs,
                ..Default::default()
            };
            verify_one(&id, &params, order, json.as_deref(), &options)
        }
        Command::Suite { config, output } => run_suite(&config, output),
        Command::Dilog { max_k, max_n, json } => dilog(max_k, max_n, json.as_deref()),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("qrr: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn list() {
    for d in list_identities() {
        let kind = match d.kind {
            Kind::Theorem => "theorem",
            Kind::Conjecture => "conjecture",
            Kind::Equivalence => "equivalence",
        };
        let params: Vec<String> = d
            .params
            .iter()
            .map(|p| {
                let ty = match p.kind {
                    ParamKind::Int { min } => format!("int>={min}"),
                    ParamKind::Rationals => "rationals".to_string(),
                };
                match p.default {
                    Some(def) => format!("{}:{ty}={def}", p.name),
                    None => format!("{}:{ty}", p.name),
                }
            })
            .collect();
        println!("{:<26} {:<11} [{}]", d.id, kind, params.join(", "));
        println!("    {}", d.summary);
    }
}

fn write_json(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Exit code for a batch of reports.
fn exit_code(reports: &[VerificationReport], strict: bool) -> u8 {
    if reports.iter().any(|r| r.internal_error) {
        EXIT_INTERNAL
    } else if reports.iter().any(|r| r.status == Status::Error) {
        EXIT_USAGE
    } else if reports.iter().any(|r| r.is_blocking(strict)) {
        EXIT_MISMATCH
    } else {
        0
    }
}

fn verify_one(
    id: &str,
    params: &[(String, String)],
    order: i64,
    json: Option<&Path>,
    options: &VerifyOptions,
) -> Result<u8, CliError> {
    if order < 0 {
        return Err(CliError::Usage(format!("order must be nonnegative, got {order}")));
    }
    let inst = IdentityInstance::from_pairs(id, params).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = verify_with(&inst, order, options);
    let text = report.to_json();
    println!("{text}");
    eprintln!("{}: {}", report.id, report.summary);
    if let Some(path) = json {
        write_json(path, &text)?;
    }
    // a single conjecture mismatch is still a mismatch
    Ok(exit_code(std::slice::from_ref(&report), true))
}

fn run_suite(config_path: &Path, output: Option<PathBuf>) -> Result<u8, CliError> {
    let config = suite::SuiteConfig::load(config_path)?;
    let instances = config.instances()?;
    let workers = suite::worker_count(config.parallelism)?;
    let reports = suite::run(&instances, workers)?;
    let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
    match output.or(config.output_path.clone()) {
        Some(path) => write_json(&path, &text)?,
        None => println!("{text}"),
    }
    let failed: Vec<_> = reports.iter().filter(|r| r.status != Status::Pass).collect();
    for r in &failed {
        let note = if r.kind == Kind::Conjecture && r.status == Status::Fail {
            " (conjecture)"
        } else {
            ""
        };
        eprintln!("not passed{note}: {} {:?} -> {}", r.id, r.params, r.summary);
    }
    eprintln!("{} of {} entries passed", reports.len() - failed.len(), reports.len());
    Ok(exit_code(&reports, config.fail_on_conjecture))
}

fn dilog(max_k: usize, max_n: usize, json: Option<&Path>) -> Result<u8, CliError> {
    if max_k < 2 || max_n < 2 {
        return Err(CliError::Usage("--max-K and --max-N must be at least 2".into()));
    }
    let grid = dilog_grid(max_k, max_n);
    let mut checks: Vec<&str> = Vec::new();
    for r in &grid.rows {
        if !checks.contains(&r.check) {
            checks.push(r.check);
        }
    }
    for check in checks {
        let rows: Vec<_> = grid.rows.iter().filter(|r| r.check == check).collect();
        let worst = rows.iter().map(|r| r.defect).fold(0.0, f64::max);
        let bad = rows.iter().filter(|r| !r.passed).count();
        println!("{check:<14} {:>3} cases  worst defect {worst:.3e}  failures {bad}", rows.len());
    }
    for r in grid.failures() {
        let detail = r.detail.as_deref().unwrap_or("");
        eprintln!("failed: {} k={:?} N={:?} lhs={} rhs={} {detail}", r.check, r.k, r.n, r.lhs, r.rhs);
    }
    if let Some(path) = json {
        write_json(path, &serde_json::to_string_pretty(&grid).expect("grid serializes"))?;
    }
    Ok(if grid.passed() { 0 } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qrr_core::registry::verify;

    fn report(id: &str, status: Status, internal: bool) -> VerificationReport {
        let mut r = verify(&IdentityInstance::default_for(id).unwrap(), 2);
        r.status = status;
        r.internal_error = internal;
        r
    }

    #[test]
    fn exit_codes() {
        let pass = report("rr-1", Status::Pass, false);
        let fail = report("rr-1", Status::Fail, false);
        let conj_fail = report("conjecture-1", Status::Fail, false);
        let usage = report("rr-1", Status::Error, false);
        let internal = report("rr-1", Status::Error, true);
        assert_eq!(exit_code(std::slice::from_ref(&pass), false), 0);
        assert_eq!(exit_code(&[pass.clone(), fail.clone()], false), EXIT_MISMATCH);
        assert_eq!(exit_code(&[pass.clone(), conj_fail.clone()], false), 0);
        assert_eq!(exit_code(&[pass.clone(), conj_fail], true), EXIT_MISMATCH);
        assert_eq!(exit_code(&[fail.clone(), usage.clone()], false), EXIT_USAGE);
        assert_eq!(exit_code(&[fail, usage, internal], false), EXIT_INTERNAL);
    }

    #[test]
    fn perturbation_syntax() {
        assert_eq!(parse_perturbation("3:1").unwrap(), (Exponent::from_integer(3), 1));
        assert_eq!(parse_perturbation("1/2:-4").unwrap(), (Exponent::new(1, 2), -4));
        assert!(parse_perturbation("3").is_err());
        assert!(parse_perturbation("1,2:1").is_err());
    }
}
