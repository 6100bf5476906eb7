mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Outcome};

/// Exact construction and verification of mixed Frobenius structures.
#[derive(Parser, Debug)]
#[command(
    name = "mixfrob",
    version,
    after_help = "Exit status: 0 if every certificate passes, 1 on a failed certificate or condition, 2 on bad input.\n\
                  Set MIXFROB_MAX_MONOMIALS to cap the size of jet rings."
)]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Print nothing to standard output or progress lines to standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Jacobian rings and Gauss-Manin systems of Laurent polynomials.
    #[command(subcommand)]
    Bmodel(BmodelCmd),
    /// Mixed trTLEP-structures in JSON form.
    #[command(subcommand)]
    Trtlep(TrtlepCmd),
    /// Unfoldings.
    #[command(subcommand)]
    Unfold(UnfoldCmd),
    /// Limits along a nilpotent endomorphism.
    #[command(subcommand)]
    Limit(LimitCmd),
    /// Local A-model of a toric surface.
    #[command(subcommand)]
    Amodel(AmodelCmd),
    /// Built-in acceptance checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCmd {
    /// Reflexivity, dilate counts and degree-one generation.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Laurent polynomial, one term `m_1 .. m_d : p/q` per line.
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum BmodelCmd {
    /// Graded Jacobian ring, monomial basis and weight filtration.
    Ring(PolyArgs),
    /// Regularity with respect to the Newton polytope.
    Regular(PolyArgs),
    /// Generation of the ring by degree one.
    H2(PolyArgs),
    /// Gauss-Manin connection matrices along deformation directions.
    Gm {
        #[command(flatten)]
        poly: PolyArgs,
        /// Exponent of a deformation monomial, e.g. `0,0`; repeatable.
        #[arg(long = "direction", value_parser = parse_exponent, default_values = ["0,0"])]
        directions: Vec<Vec<i64>>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
    },
    /// Rees construction, universal unfolding and the mixed Frobenius manifold.
    Pipeline {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "direction", value_parser = parse_exponent, default_values = ["0,0"])]
        directions: Vec<Vec<i64>>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum TrtlepCmd {
    /// Axiom certificate of a structure.
    Verify { file: PathBuf },
    /// Rees construction from weight, Hodge and opposite filtrations.
    Rees { file: PathBuf },
    /// Tate twist by a half-integer.
    Twist {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum UnfoldCmd {
    /// Unfolding along given potential derivatives.
    Run { file: PathBuf },
    /// Universal unfolding at a section.
    Universal {
        file: PathBuf,
        /// Truncation order in the new variables.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum LimitCmd {
    /// Limit structure on the cokernel of a nilpotent endomorphism.
    Run {
        file: PathBuf,
        /// Tate twist applied to the limit.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AmodelCmd {
    /// Quantum connection, limit, unfolding and mixed Frobenius manifold.
    Pipeline {
        /// Ray list, one `x y` per line, counterclockwise.
        #[arg(long)]
        fan: PathBuf,
        /// Gromov-Witten table, lines `d_1 .. d_r : p/q`.
        #[arg(long)]
        gw: PathBuf,
        /// Base point, comma separated rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<String>,
        /// Jet order in the base variables.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Jet order in the unfolding variables.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Largest degree known in the table; defaults to the largest listed.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cutoff: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Runs all eight acceptance checks.
    All {
        /// First seed of the random suites.
        #[arg(long, default_value_t = mixfrob::verify::criteria::SUITE_SEED)]
        seed: u64,
    },
}

fn parse_exponent(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad exponent {s:?}"))).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.quiet) {
        Ok(Outcome { report, passed }) => {
            let text = mixfrob::io::render(&report);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else if !cli.quiet {
                print!("{text}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}
