//! Command-line front end: `solve`, `verify`, `combine` and `oracle`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use hinterp::driver::{combine_interpolant, hierarchical_interpolant, verify_interpolant, Answer, Verification};
use hinterp::oracle::{finite_model_oracle, OracleConfig, OracleMode, Verdict};
use hinterp::problem::{parse_formula, parse_problem, BlockKind, ProblemFile};
use hinterp::Error;

#[derive(Parser)]
#[command(name = "hinterp", version, about = "Ground interpolants for local theory extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide A ∧ B and print an interpolant when it is unsatisfiable.
    Solve {
        file: PathBuf,
        /// Prefer side-wise entailment and strong separators.
        #[arg(long)]
        strong: bool,
        /// Check satisfiability before separating.
        #[arg(long)]
        presat: bool,
        /// Print the derivation to stderr.
        #[arg(long)]
        trace: bool,
        /// Re-check the interpolant before printing it.
        #[arg(long)]
        verify: bool,
    },
    /// Check that a formula is an interpolant for the problem.
    Verify {
        file: PathBuf,
        #[arg(short, long)]
        interpolant: String,
    },
    /// Interpolate between G1 and G2 over disjoint extensions.
    Combine { file: PathBuf },
    /// Search for small models of A ∧ B.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Use the free-algebra check (base-only lattice problems).
        #[arg(long)]
        free: bool,
        /// Give up after this many seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
}

fn load(path: &Path) -> Result<ProblemFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_problem(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let show = |e: Error| e.to_string();
    match cli.command {
        Command::Solve { file, strong, presat, trace, verify } => {
            let mut f = load(&file)?;
            if f.blocks == BlockKind::Combination {
                return Err("G1/G2 problems are solved with `combine`".into());
            }
            let p = &mut f.problem;
            p.options.strong = strong;
            p.options.presat = presat;
            p.options.trace = trace;
            p.options.verify = verify;
            match hierarchical_interpolant(p).map_err(show)? {
                Answer::Sat => {
                    println!("sat");
                    Ok(ExitCode::from(1))
                }
                Answer::Unsat(i) => {
                    if trace {
                        for line in &i.trace {
                            eprintln!("{}", line);
                        }
                    }
                    println!("unsat");
                    println!("(interpolant {})", i.formula.display(&p.store));
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Verify { file, interpolant } => {
            let mut f = load(&file)?;
            let formula = parse_formula(&mut f.problem, &interpolant).map_err(show)?;
            match verify_interpolant(&mut f.problem, &formula).map_err(show)? {
                Verification::Ok => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Verification::Failed(failures) => {
                    for f in &failures {
                        println!("failed check {}: {}", f.check, f.message);
                        if let Some(w) = &f.witness {
                            println!("countermodel:");
                            for line in w.lines() {
                                println!("  {}", line);
                            }
                        }
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Combine { file } => {
            let mut f = load(&file)?;
            let formula = combine_interpolant(&mut f.problem).map_err(show)?;
            println!("unsat");
            println!("(interpolant {})", formula.display(&f.problem.store));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { file, max_size, free, timeout } => {
            let f = load(&file)?;
            let mode = if free { OracleMode::FreeAlgebra } else { OracleMode::FiniteModels };
            let cfg = OracleConfig::new(mode, max_size).map_err(show)?.with_timeout(Duration::from_secs(timeout));
            let report = finite_model_oracle(&f.problem, &cfg);
            match &report.verdict {
                Verdict::Sat => println!("sat"),
                Verdict::Unsat => println!("unsat"),
                Verdict::Unknown => println!("unknown"),
            }
            if let Some(m) = &report.model {
                eprintln!("{}", m);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
