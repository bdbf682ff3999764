//! Command-line frontend: parses a `.prs` file and runs validation,
//! critical-pair enumeration, local-confluence checking, boundary-matrix
//! and lower-bound computation, homotopy-basis export, traced
//! normalization, or derivation replay.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 a
//! non-joinable critical pair, 3 fuel exhausted, 4 usage or parse error.

use clap::{Args, Parser, Subcommand};
use hho_core::critical::{critical_pairs, local_confluence_check};
use hho_core::homology::{homotopy_basis, lower_bound, HomologyError};
use hho_core::parse::{parse_file, parse_script, parse_term_in_context};
use hho_core::report;
use hho_core::rewrite::{
    normalize_with_trace, replay_derivation, validate_prs, Prs, RewriteError, Strategy,
    DEFAULT_FUEL,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_NOT_JOINABLE: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hho",
    about = "Critical pairs, confluence, and homological lower bounds for higher-order pattern rewriting systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Input system (.prs file)
    file: PathBuf,
    /// Emit the report as JSON on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Search {
    /// Rewrite strategy: leftmost-outermost (lo) or rightmost-innermost (ri)
    #[arg(long, default_value = "leftmost-outermost")]
    strategy: Strategy,
    /// Maximum rewrite steps per normalization (overrides HHO_FUEL)
    #[arg(long)]
    fuel: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the rule hypotheses the other commands rely on
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// List the critical peaks of the system
    Cps {
        #[command(flatten)]
        common: Common,
    },
    /// Check local confluence by joining every critical pair
    Confluence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
    },
    /// Compute the second boundary matrix, its rank, and the lower bound
    Bound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
    },
    /// Export the homotopy basis induced by the critical pairs
    Basis {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
    },
    /// Normalize a term, printing the rewrite trace
    Normalize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
        /// Term to normalize: `(x:U, ...) |- term` or a closed term
        #[arg(long)]
        term: String,
    },
    /// Verify a derivation script step by step
    Replay {
        #[command(flatten)]
        common: Common,
        /// Script file: `term <ctx> |- <t>` then `<fwd|bwd> <rule> at <pos>` lines
        #[arg(long)]
        script: PathBuf,
    },
}

fn fuel_of(search: &Search) -> Result<usize, String> {
    if let Some(f) = search.fuel {
        return Ok(f);
    }
    match std::env::var("HHO_FUEL") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("HHO_FUEL must be a number, got `{v}`")),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        );
    } else {
        print!("{text}");
    }
}

fn load(path: &PathBuf) -> Result<Prs, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let (_, prs) =
        parse_file(&text).map_err(|e| (EXIT_USAGE, format!("{}:{e}", path.display())))?;
    Ok(prs)
}

/// Which validation findings a command needs before it may run.
#[derive(Clone, Copy)]
enum Needs {
    /// Pattern left-hand sides and well-formed rules: enough to rewrite
    /// and to enumerate critical pairs.
    Rewriting,
    /// The full hypotheses of the boundary-matrix theorem.
    Everything,
}

fn load_validated(path: &PathBuf, needs: Needs) -> Result<Prs, (u8, String)> {
    let prs = load(path)?;
    let report = validate_prs(&prs);
    let ok = match needs {
        Needs::Rewriting => report.rewriting_ok(),
        Needs::Everything => report.ok,
    };
    if !ok {
        let rendered = report::validation_text(&report::validation_out(&report));
        return Err((
            EXIT_INVALID,
            format!(
                "{}: the system does not validate\n{rendered}",
                path.display()
            ),
        ));
    }
    Ok(prs)
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    match cli.cmd {
        Cmd::Validate { common } => {
            let prs = load(&common.file)?;
            let report = validate_prs(&prs);
            let out = report::validation_out(&report);
            emit(common.json, &out, report::validation_text(&out));
            Ok(if report.ok { EXIT_OK } else { EXIT_INVALID })
        }
        Cmd::Cps { common } => {
            let prs = load_validated(&common.file, Needs::Rewriting)?;
            let peaks = critical_pairs(&prs);
            let out = report::cps_out(&prs, &peaks);
            emit(common.json, &out, report::cps_text(&out));
            Ok(EXIT_OK)
        }
        Cmd::Confluence { common, search } => {
            let prs = load_validated(&common.file, Needs::Rewriting)?;
            let fuel = fuel_of(&search).map_err(|m| (EXIT_USAGE, m))?;
            let (peaks, rep) = local_confluence_check(&prs, search.strategy, fuel);
            let out = report::confluence_out(&prs, &peaks, &rep, fuel);
            emit(common.json, &out, report::confluence_text(&out));
            Ok(match rep.locally_confluent {
                Some(true) => EXIT_OK,
                Some(false) => EXIT_NOT_JOINABLE,
                None => EXIT_FUEL,
            })
        }
        Cmd::Bound { common, search } => {
            let prs = load_validated(&common.file, Needs::Everything)?;
            let fuel = fuel_of(&search).map_err(|m| (EXIT_USAGE, m))?;
            let (rep, matrix) = lower_bound(&prs, search.strategy, fuel).map_err(homology_exit)?;
            let out = report::bound_out(&prs, search.strategy, fuel, &rep, &matrix);
            emit(common.json, &out, report::bound_text(&out));
            Ok(EXIT_OK)
        }
        Cmd::Basis { common, search } => {
            let prs = load_validated(&common.file, Needs::Everything)?;
            let fuel = fuel_of(&search).map_err(|m| (EXIT_USAGE, m))?;
            let basis = homotopy_basis(&prs, search.strategy, fuel).map_err(homology_exit)?;
            let out = report::basis_out(&prs, search.strategy, fuel, &basis);
            emit(common.json, &out, report::basis_text(&out));
            Ok(EXIT_OK)
        }
        Cmd::Normalize {
            common,
            search,
            term,
        } => {
            let prs = load_validated(&common.file, Needs::Rewriting)?;
            let fuel = fuel_of(&search).map_err(|m| (EXIT_USAGE, m))?;
            let (ctx, t) = parse_term_in_context(&prs.sig, &term)
                .map_err(|e| (EXIT_USAGE, format!("--term: {e}")))?;
            match normalize_with_trace(&prs, &ctx, &t, search.strategy, fuel) {
                Ok(trace) => {
                    let out = report::normalize_out(&prs, search.strategy, fuel, &trace);
                    emit(common.json, &out, report::normalize_text(&out));
                    Ok(EXIT_OK)
                }
                Err(RewriteError::FuelExhausted { partial }) => Err((
                    EXIT_FUEL,
                    format!(
                        "fuel exhausted after {} steps; last term: {}",
                        partial.steps.len(),
                        report::Printer::new(&prs).term(&partial.target)
                    ),
                )),
                Err(RewriteError::Type(e)) => Err((EXIT_USAGE, format!("--term: {e}"))),
            }
        }
        Cmd::Replay { common, script } => {
            let prs = load_validated(&common.file, Needs::Rewriting)?;
            let text = std::fs::read_to_string(&script)
                .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", script.display())))?;
            let (ctx, term, steps) = parse_script(&prs.sig, &text)
                .map_err(|e| (EXIT_USAGE, format!("{}:{e}", script.display())))?;
            let source = prs
                .canonical(&ctx, &term)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            match replay_derivation(&prs, &ctx, &term, &steps) {
                Ok((final_term, done)) => {
                    let out = report::replay_out(&prs, &ctx, &source, &done, &final_term);
                    emit(common.json, &out, report::replay_text(&out));
                    Ok(EXIT_OK)
                }
                Err(e) => Err((EXIT_INVALID, format!("replay failed: {e}"))),
            }
        }
    }
}

fn homology_exit(e: HomologyError) -> (u8, String) {
    match e {
        HomologyError::NotJoinable { .. } => (EXIT_NOT_JOINABLE, e.to_string()),
        HomologyError::FuelExhausted { .. } => (EXIT_FUEL, e.to_string()),
        HomologyError::Rewrite(inner) => (EXIT_USAGE, inner.to_string()),
    }
}

/// Die quietly when the consumer of a pipe goes away, as line tools do.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    // clap's own exit code for bad usage differs from ours; intercept
    let cli = match <Cli as Parser>::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                eprint!("{e}");
                EXIT_USAGE
            } else {
                print!("{e}");
                EXIT_OK
            };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
