use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use qball::report::Report;
use qball::{NCPoly, VScalar};
use qball_cli::{parse_expr, render, run};

/// Exact checks for the quantum matrix ball.
#[derive(Parser)]
#[command(name = "qball", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an expression.
    Normalize {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..))]
        n: u8,
        /// Evaluate coefficients at this rational value of v.
        #[arg(long = "eval-v")]
        eval_v: Option<BigRational>,
        expr: String,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long, value_parser = suite_names())]
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Also run a numeric pass with v fixed to this rational.
        #[arg(long = "eval-v")]
        eval_v: Option<BigRational>,
    },
    /// Compare computed objects at v = 1 with classical closed forms.
    Limits {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..))]
    n: u8,
    /// Truncation degree D.
    #[arg(long, default_value_t = 2)]
    cutoff: u32,
    /// Also write the JSON report here.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    let mut names: Vec<&str> = run::SUITES.to_vec();
    names.push("all");
    clap::builder::PossibleValuesParser::new(names)
}

fn emit(reports: &[Report], single: bool, output: Option<&PathBuf>) -> Result<(), String> {
    let json = if single {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .map_err(|e| e.to_string())?;
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{json}");
    if let Some(path) = output {
        std::fs::write(path, format!("{json}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn normalize(n: u8, eval_v: Option<&BigRational>, expr: &str) -> ExitCode {
    let (tag, p) = match parse_expr(expr, n) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("parse error {e}");
            return ExitCode::from(2);
        }
    };
    let p = match eval_v {
        None => p,
        Some(v0) => {
            let mut out = NCPoly::zero();
            for (w, c) in p.terms() {
                match c.eval(v0) {
                    Ok(x) => out.add_term(w.clone(), VScalar::from_rational(&x)),
                    Err(e) => {
                        eprintln!("{e}");
                        return ExitCode::from(1);
                    }
                }
            }
            out
        }
    };
    let _ = writeln!(std::io::stdout().lock(), "{}", render(tag, n, &p));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Normalize { n, eval_v, expr } = &cli.cmd {
        return normalize(*n, eval_v.as_ref(), expr);
    }
    let pool = match run::threads_from_env().and_then(run::pool) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let (reports, single, output) = match &cli.cmd {
        Command::Verify { suite, common, eval_v } => {
            let reports = pool
                .install(|| run::verify(suite, common.n, common.cutoff, eval_v.as_ref()))
                .expect("suite names are checked by the argument parser");
            (reports, suite != "all", common.output.as_ref())
        }
        Command::Limits { common } => {
            let r = pool.install(|| qball::classical::limits_check(common.n, common.cutoff));
            (vec![r], true, common.output.as_ref())
        }
        Command::Normalize { .. } => unreachable!(),
    };
    if let Err(e) = emit(&reports, single, output) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    ExitCode::from(run::exit_code(&reports))
}
