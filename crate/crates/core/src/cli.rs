//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 no feasible point found by `search`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::counterexample::{
    closed_form_gap, compare_counterexample, sweep, violation_boundary, VerificationReport,
};
use crate::dist::Shape;
use crate::error::{Error, Result};
use crate::info::{analyze_tripartite, InfoReport};
use crate::io::{emit_sweep_csv, load_distribution, render_sweep_svg, SearchDocument};
use crate::search::{run_search, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "guessgap", version, about = "Guessing probability versus mutual information for (Bob, Alice, Eve) distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the counterexample family at one epsilon against its closed forms.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Tabulate the family over an epsilon range.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for the largest violation gap at a given alphabet shape.
    Search {
        #[arg(long)]
        bob: usize,
        #[arg(long)]
        alice: usize,
        #[arg(long)]
        eve: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "lambda", default_value_t = SearchConfig::default().penalty_weight)]
        lambda: f64,
        #[arg(long, default_value_t = SearchConfig::default().max_iters)]
        max_iters: usize,
        /// Skip the built-in warm start for shape (2, 2, 4).
        #[arg(long)]
        no_warm_start: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Report guessing probabilities and mutual informations of a distribution file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the epsilon where the family stops violating the implication.
    Boundary,
}

/// Runs the CLI against the process's standard streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams; returns the exit code.
pub fn dispatch_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                let _ = writeln!(err, "  caused by: {s}");
                source = s.source();
            }
            EXIT_USAGE
        }
    }
}

fn write_report(out: &mut dyn Write, title: &str, r: &InfoReport) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(out, "  p_b={:.6}", r.p_b)?;
    writeln!(out, "  p_e={:.6}", r.p_e)?;
    writeln!(out, "  i_ab={:.6}", r.i_ab)?;
    writeln!(out, "  i_ae={:.6}", r.i_ae)?;
    writeln!(out, "  h_a={:.6}", r.h_a)?;
    writeln!(out, "  gap={:.6}", r.gap())?;
    writeln!(out, "  fano_slack_b={:.6}", r.fano_slack_b)?;
    writeln!(out, "  fano_slack_e={:.6}", r.fano_slack_e)?;
    writeln!(out, "  premise_holds={}", r.premise_holds)?;
    writeln!(out, "  implication_violated={}", r.implication_violated)?;
    let verdict = if r.implication_violated {
        "VIOLATES P_B > P_E => I(A,B) > I(A,E)"
    } else if r.premise_holds {
        "consistent with P_B > P_E => I(A,B) > I(A,E)"
    } else {
        "premise P_B > P_E does not hold"
    };
    writeln!(out, "  {verdict}")
}

fn write_verification(out: &mut dyn Write, v: &VerificationReport) -> std::io::Result<()> {
    writeln!(out, "epsilon={:.6} tol={:e}", v.epsilon, v.tol)?;
    write_report(out, "analyzed distribution:", &v.computed)?;
    write_report(out, "closed form:", &v.closed_form)?;
    writeln!(out, "max_deviation={:e}", v.max_deviation)?;
    writeln!(out, "{}", if v.passed { "PASS" } else { "FAIL" })
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify { epsilon, tol } => {
            let v = compare_counterexample(epsilon, tol)?;
            write_verification(out, &v)?;
            Ok(if v.passed { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
        }
        Command::Sweep { start, end, steps, csv, svg } => {
            let rows = sweep(start, end, steps)?;
            emit_sweep_csv(&rows, &csv)?;
            if let Some(svg) = &svg {
                render_sweep_svg(&rows, svg)?;
            }
            writeln!(out, "{:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "epsilon", "p_b", "p_e", "i_ab", "i_ae", "gap")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                    r.epsilon, r.p_b, r.p_e, r.i_ab, r.i_ae, r.gap
                )?;
            }
            writeln!(out, "wrote {}", csv.display())?;
            if let Some(svg) = svg {
                writeln!(out, "wrote {}", svg.display())?;
            }
            Ok(EXIT_OK)
        }
        Command::Search {
            bob,
            alice,
            eve,
            delta,
            restarts,
            seed,
            lambda,
            max_iters,
            no_warm_start,
            json,
        } => {
            let cfg = SearchConfig {
                shape: Shape::new(bob, alice, eve)?,
                delta,
                penalty_weight: lambda,
                restarts,
                seed,
                max_iters,
                include_family_warm_start: !no_warm_start,
                ..SearchConfig::default()
            };
            let result = match run_search(&cfg) {
                Ok(r) => r,
                Err(Error::NoFeasiblePoint) => {
                    writeln!(out, "no feasible point found (P_B - P_E >= {delta:.6} never reached)")?;
                    return Ok(EXIT_INFEASIBLE);
                }
                Err(e) => return Err(e),
            };
            writeln!(out, "shape={} delta={delta:.6} lambda={lambda:.6} restarts={restarts} seed={seed}", cfg.shape)?;
            writeln!(
                out,
                "best restart={} iterations={} objective={:.6} feasible={}",
                result.restart_index, result.iterations_used, result.objective, result.feasible
            )?;
            write_report(out, "best report:", &result.report)?;
            if let Some(path) = json {
                std::fs::write(&path, SearchDocument::new(&result, &cfg).to_json())?;
                writeln!(out, "wrote {}", path.display())?;
            }
            Ok(if result.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::Analyze { input } => {
            let dist = load_distribution(&input)?;
            writeln!(out, "shape={}", dist.shape())?;
            write_report(out, "report:", &analyze_tripartite(&dist))?;
            Ok(EXIT_OK)
        }
        Command::Boundary => {
            let eps = violation_boundary();
            writeln!(out, "epsilon_star={eps:.6}")?;
            writeln!(out, "epsilon_star_full={eps:.17e}")?;
            writeln!(out, "residual={:e}", closed_form_gap(eps).abs())?;
            Ok(EXIT_OK)
        }
    }
}
