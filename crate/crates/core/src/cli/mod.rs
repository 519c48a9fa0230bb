//! The `nice` command-line tool.
//!
//! Exit codes: 0 nice / pass / found, 1 not nice / fail / none found,
//! 2 usage or parse error, 3 budget exhausted, 4 internal check failed.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use crate::arith::{self, ArithError, FactorConfig};
use crate::construct::{self, ConstructError};
use crate::model::{divisors_gt1, Factorization};
use crate::oracle::{self, AdmissibilityOutcome, OracleError, SearchStatus, DEFAULT_NODE_BUDGET};
use crate::verify::{check_complete_moduli, check_good, verify_set, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variable overriding the factoring effort (rho iterations).
pub const FACTOR_BUDGET_VAR: &str = "NICE_FACTOR_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "nice",
    version,
    about = "Nice integers and good sets of congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether n is nice.
    Check {
        #[arg(value_parser = parse_positive)]
        n: BigUint,
    },
    /// Build a verified good set for a nice n.
    Construct {
        #[arg(value_parser = parse_positive)]
        n: BigUint,
        /// Emit the JSON certificate instead of text.
        #[arg(long)]
        json: bool,
        /// Write the certificate to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file (text or JSON).
    Verify {
        path: PathBuf,
        /// The integer the certificate is for; enables the completeness check.
        #[arg(long = "n", value_name = "N", value_parser = parse_positive)]
        n: Option<BigUint>,
    },
    /// Brute-force search over the divisors of n.
    Oracle {
        #[arg(value_parser = parse_positive)]
        n: BigUint,
        /// Look for a good set that also covers the integers.
        #[arg(long)]
        admissible: bool,
        #[arg(long, value_name = "B", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Print the prime factorization of n.
    Factor {
        #[arg(value_parser = parse_positive)]
        n: BigUint,
    },
}

fn parse_positive(s: &str) -> Result<BigUint, String> {
    match format::parse_decimal(s) {
        Some(n) if n >= BigUint::from(1u32) => Ok(n),
        _ => Err(format!("`{s}` is not a positive decimal integer")),
    }
}

/// Runtime settings that do not come from the command line.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub factor: FactorConfig,
}

impl Config {
    /// Defaults, with the factoring budget taken from the environment if set.
    pub fn from_env() -> Result<Self, String> {
        let mut config = Config::default();
        if let Ok(value) = std::env::var(FACTOR_BUDGET_VAR) {
            config.factor.rho_budget = value.trim().parse().map_err(|_| {
                format!("{FACTOR_BUDGET_VAR}=`{value}` is not a non-negative integer")
            })?;
        }
        Ok(config)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Config::from_env() {
        Ok(config) => run_with(args, &config, out, err),
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn run_with<I, T>(args: I, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check { n } => check(&n, config, out),
        Command::Construct { n, json, out: path } => construct(&n, json, path, config, out, err),
        Command::Verify { path, n } => verify(&path, n, config, out),
        Command::Oracle {
            n,
            admissible,
            node_budget,
        } => run_oracle(&n, admissible, node_budget, config, out),
        Command::Factor { n } => factor(&n, config, out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.msg);
            failure.code
        }
    }
}

/// An error message paired with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        let code = match e {
            ArithError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Factor(inner) => inner.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Factor(inner) => inner.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn check(n: &BigUint, config: &Config, out: &mut dyn Write) -> CmdResult {
    let f = arith::factorize_with(n, &config.factor)?;
    if f.is_empty() {
        writeln!(out, "nice (trivially)")?;
        return Ok(EXIT_OK);
    }
    let verdict = construct::niceness_condition(&f).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{verdict}")?;
    Ok(if verdict.is_nice() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn construct(
    n: &BigUint,
    json: bool,
    path: Option<PathBuf>,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let f = arith::factorize_with(n, &config.factor)?;
    let set = match construct::construct_for_factorization(&f) {
        Ok(set) => set,
        Err(ConstructError::NotNice(verdict)) => {
            writeln!(err, "{n} is {verdict}")?;
            return Ok(EXIT_FAIL);
        }
        Err(e) => {
            return Err(Failure {
                code: EXIT_INTERNAL,
                msg: format!("construction failed: {e}"),
            })
        }
    };

    let goodness = check_good(&set.congruences())?;
    let completeness = check_complete_moduli(&f, set.moduli());
    if !goodness.is_good() || !completeness.is_complete() {
        return Err(Failure {
            code: EXIT_INTERNAL,
            msg: format!(
                "constructed set failed self-verification ({} violations, {} missing, {} extraneous)",
                goodness.violations.len(),
                completeness.missing_divisors.len(),
                completeness.extraneous_moduli.len()
            ),
        });
    }

    let doc = if json {
        format::emit_json(&set, &f)
    } else {
        format::emit_text(&set)
    };
    match path {
        Some(p) => {
            std::fs::write(&p, doc).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?
        }
        None => out.write_all(doc.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn verify(path: &PathBuf, n: Option<BigUint>, config: &Config, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let cert = format::parse_certificate(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let n = match (n, cert.n) {
        (Some(given), Some(stated)) if given != stated => {
            return Err(Failure::usage(format!(
                "--n {given} disagrees with the certificate's n = {stated}"
            )))
        }
        (given, stated) => given.or(stated),
    };

    let (good, complete) = match &n {
        Some(n) => {
            let report = verify_set(n, &cert.congruences, &config.factor)?;
            writeln!(out, "n = {n}, {} congruences", cert.congruences.len())?;
            print_violations(out, &report.violations)?;
            for d in &report.missing_divisors {
                writeln!(out, "missing divisor {d}")?;
            }
            for m in &report.extraneous_moduli {
                writeln!(out, "modulus {m} does not divide n")?;
            }
            (report.good, Some(report.complete))
        }
        None => {
            let report = check_good(&cert.congruences)?;
            writeln!(out, "{} congruences, n not given", cert.congruences.len())?;
            print_violations(out, &report.violations)?;
            (report.is_good(), None)
        }
    };

    writeln!(out, "good: {}", yes_no(good))?;
    match complete {
        Some(c) => writeln!(out, "complete: {}", yes_no(c))?,
        None => writeln!(out, "complete: not checked")?,
    }
    let passed = good && complete.unwrap_or(true);
    writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

fn print_violations(
    out: &mut dyn Write,
    violations: &[crate::model::Violation],
) -> std::io::Result<()> {
    for v in violations {
        writeln!(out, "overlap {v}")?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run_oracle(
    n: &BigUint,
    admissible: bool,
    budget: u64,
    config: &Config,
    out: &mut dyn Write,
) -> CmdResult {
    if admissible {
        return Ok(match oracle::admissibility_scan(n, budget)? {
            AdmissibilityOutcome::NoGoodSetIsCovering {
                good_sets,
                nodes_expanded,
            } => {
                writeln!(
                    out,
                    "no good set is covering ({good_sets} good sets, {nodes_expanded} nodes expanded)"
                )?;
                EXIT_FAIL
            }
            AdmissibilityOutcome::FoundCoveringGoodSet(set) => {
                writeln!(out, "found a covering good set")?;
                for c in set {
                    writeln!(out, "{c}")?;
                }
                EXIT_OK
            }
            AdmissibilityOutcome::BudgetExceeded { nodes_expanded } => {
                writeln!(out, "budget exceeded after {nodes_expanded} nodes")?;
                EXIT_BUDGET
            }
        });
    }

    let f = arith::factorize_with(n, &config.factor)?;
    let outcome = oracle::exists_good_assignment(&divisors_gt1(&f), budget)?;
    let nodes = outcome.nodes_expanded;
    Ok(match outcome.status {
        SearchStatus::Found(set) => {
            writeln!(out, "found ({nodes} nodes expanded)")?;
            for c in set {
                writeln!(out, "{c}")?;
            }
            EXIT_OK
        }
        SearchStatus::Unsatisfiable => {
            writeln!(out, "unsatisfiable ({nodes} nodes expanded)")?;
            EXIT_FAIL
        }
        SearchStatus::BudgetExceeded => {
            writeln!(out, "budget exceeded after {nodes} nodes")?;
            EXIT_BUDGET
        }
    })
}

fn factor(n: &BigUint, config: &Config, out: &mut dyn Write) -> CmdResult {
    let f: Factorization = arith::factorize_with(n, &config.factor)?;
    if f.is_empty() {
        writeln!(out, "1 = 1")?;
    } else {
        writeln!(out, "{n} = {f}")?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nice").chain(args.iter().copied());
        let code = run_with(argv, &Config::default(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_command() {
        assert_eq!(
            call(&["check", "25050025"]),
            (0, "nice (p=5, omega=4)\n".into(), String::new())
        );
        assert_eq!(
            call(&["check", "11025"]),
            (1, "not nice (p=3, omega=3)\n".into(), String::new())
        );
        assert_eq!(call(&["check", "1"]).1, "nice (trivially)\n");
        for bad in ["0", "abc", "-5", "1e3", ""] {
            assert_eq!(call(&["check", bad]).0, 2, "{bad:?}");
        }
    }

    #[test]
    fn construct_command() {
        let (code, out, _) = call(&["construct", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n = 8\n1 mod 2\n2 mod 4\n4 mod 8\n");
        let (code, out, err) = call(&["construct", "12"]);
        assert_eq!((code, out.as_str()), (1, ""));
        assert_eq!(err, "12 is not nice (p=2, omega=2)\n");
    }

    #[test]
    fn oracle_command() {
        let (code, out, _) = call(&["oracle", "6"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.lines().skip(1).collect::<Vec<_>>(),
            ["0 mod 2", "0 mod 3", "1 mod 6"]
        );
        assert_eq!(call(&["oracle", "12"]).0, 1);
        assert!(call(&["oracle", "12"]).1.starts_with("unsatisfiable"));
        let (code, out, _) = call(&["oracle", "6", "--admissible"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("no good set is covering"));
        assert_eq!(call(&["oracle", "30", "--node-budget", "2"]).0, 3);
    }

    #[test]
    fn factor_command() {
        assert_eq!(
            call(&["factor", "3675"]),
            (0, "3675 = 3 * 5^2 * 7^2\n".into(), String::new())
        );
        assert_eq!(call(&["factor", "1"]).1, "1 = 1\n");
    }

    #[test]
    fn factor_budget_is_enforced() {
        let config = Config {
            factor: FactorConfig {
                trial_limit: 100,
                rho_budget: 1,
            },
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            ["nice", "check", "1000000016000000063"],
            &config,
            &mut out,
            &mut err,
        );
        assert_eq!(code, 3);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "/nonexistent/cert.txt"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
