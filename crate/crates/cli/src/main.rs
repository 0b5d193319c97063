//! `cycdes` — construct, search for, and numerically certify cyclic
//! projective t-designs; simulate linear tomography on top of them; and run
//! the associated no-go computations.
//!
//! Every run that writes files also writes a `manifest.json` with the
//! command line, seeds, tolerances and SHA-256 digests of all inputs and
//! outputs; re-running the command reproduces the outputs byte for byte.
//!
//! Exit codes: 0 success / all checks pass, 1 semantic failure
//! (certification failed, search exhausted, ...), 2 usage or input errors.

mod commands;
mod formats;
mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Status prints go through here so a closed stdout (e.g. piping into
/// `head`) ends the stream silently instead of panicking.
pub(crate) fn emit(args: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{args}");
}

macro_rules! say {
    ($($tt:tt)*) => {
        $crate::emit(format_args!($($tt)*))
    };
}
pub(crate) use say;

#[derive(Parser)]
#[command(name = "cycdes", version, about, term_width = 100)]
pub(crate) struct Cli {
    /// Global certification tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output directory for JSON/CSV artifacts and the run manifest.
    #[arg(long, short = 'o', global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker cap for parallelizable stages (search restarts).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Build a cyclic design (difference-set assembly, doubling recursion,
    /// qubit family, or the qubit MUB generator).
    Construct(ConstructArgs),
    /// Certify a stored design or constellation at one or more degrees t.
    Verify(VerifyArgs),
    /// Difference-set utilities: verify, search, generate.
    Diffset {
        #[command(subcommand)]
        action: DiffsetAction,
    },
    /// Generate a basis whose decoherence is a simplex 2-design.
    Basis(BasisArgs),
    /// Multi-start cyclic t-design search over Gell-Mann coefficients.
    Search(SearchArgs),
    /// Existence scan over a (d, k) grid, emitted as CSV.
    Scan(ScanArgs),
    /// Random-eigenphase design statistics (Monte Carlo over seeds).
    Approx(ApproxArgs),
    /// Measure and linearly reconstruct a state with a stored design.
    Tomo(TomoArgs),
    /// Impossibility computations (Hadamard merit, simplex-3 cost, moment
    /// matrix rank, qubit moment system).
    Nogo {
        #[command(subcommand)]
        action: NogoAction,
    },
    /// End-to-end: basis → difference set → assembly → measurement →
    /// reconstruction → error report.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum ConstructMethod {
    Diffset,
    Construction1,
    QubitFamily,
    U1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum BasisKind {
    /// Pick by dimension: qubit (2), golden (3), two-amplitude (4, 8),
    /// numeric otherwise.
    Auto,
    Qubit,
    Golden,
    /// d = 3 one-parameter family; requires --phi.
    Qutrit,
    TwoAmplitude,
    Numeric,
}

#[derive(Args)]
pub(crate) struct ConstructArgs {
    #[arg(long, value_enum)]
    pub method: ConstructMethod,
    /// Dimension (diffset method).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Basis kind for the diffset method.
    #[arg(long, value_enum, default_value = "auto")]
    pub basis: BasisKind,
    /// Load the eigenbasis from a basis JSON file instead of generating it.
    #[arg(long)]
    pub basis_file: Option<PathBuf>,
    /// Family angle for --basis qutrit.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Difference-set elements, e.g. `1,2,4` (defaults to Mian-Chowla).
    #[arg(long)]
    pub dset: Option<String>,
    /// Difference-set modulus v = k+1.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Order for --method qubit-family.
    #[arg(long)]
    pub k: Option<usize>,
    /// Recursion depth for --method construction1.
    #[arg(long)]
    pub n: Option<u32>,
    /// Degrees to certify into the design file, e.g. `1,2`.
    #[arg(long, default_value = "1,2")]
    pub cert_t: String,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Restarts for numeric bases.
    #[arg(long, default_value_t = 8)]
    pub restarts: u32,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    /// Design or constellation JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Degrees to check, e.g. `1,2,3`.
    #[arg(long, default_value = "2")]
    pub t: String,
}

#[derive(Subcommand)]
pub(crate) enum DiffsetAction {
    /// Check the difference property of an explicit set.
    Verify {
        #[arg(long)]
        v: u64,
        /// Comma-separated residues.
        #[arg(long)]
        elements: String,
    },
    /// Exhaustive canonical backtracking search for a (v, K, 1) set.
    Search {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: usize,
        /// Node budget; exceeding it reports `inconclusive`.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// First n Mian-Chowla terms.
    MianChowla {
        #[arg(long)]
        n: usize,
    },
    /// The (2^d, d, 1) power-of-two set.
    PowerOfTwo {
        #[arg(long)]
        d: u32,
    },
}

#[derive(Args)]
pub(crate) struct BasisArgs {
    #[arg(long, value_enum)]
    pub kind: BasisKind,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: u32,
}

#[derive(Args)]
pub(crate) struct SearchArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Pin the eigenphases to `2π·N/(k+1)`, e.g. `0,1,3,4`.
    #[arg(long)]
    pub spectrum: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub restarts: u32,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// ε acceptance threshold for the `found` status.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_accept: f64,
}

#[derive(Args)]
pub(crate) struct ScanArgs {
    /// Dimensions, e.g. `2,3,4`.
    #[arg(long)]
    pub dims: String,
    /// Orders, e.g. `2:12` or `2,4,6`.
    #[arg(long)]
    pub ks: String,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    #[arg(long, default_value_t = 20)]
    pub restarts: u32,
    #[arg(long, default_value_t = 1500)]
    pub max_iters: usize,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub(crate) struct ApproxArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    pub basis: BasisKind,
    #[arg(long)]
    pub phi: Option<f64>,
    /// Keep the per-sample ε list in the report.
    #[arg(long, default_value_t = false)]
    pub emit_epsilons: bool,
}

#[derive(Args)]
pub(crate) struct TomoArgs {
    /// Design JSON produced by construct/search/pipeline.
    #[arg(long)]
    pub design: PathBuf,
    /// True state as a matrix JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Reuse a stored `j,mu,p` CSV instead of measuring.
    #[arg(long)]
    pub probs: Option<PathBuf>,
    /// `exact` or a shot count per basis.
    #[arg(long, default_value = "exact")]
    pub shots: String,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Interaction time per unitary application (seconds).
    #[arg(long, default_value_t = 1e-3)]
    pub tau_int: f64,
    /// State preparation time (seconds).
    #[arg(long, default_value_t = 1e-2)]
    pub tau_prep: f64,
}

#[derive(Subcommand)]
pub(crate) enum NogoAction {
    /// Grid+descent global minimum of the d = 3 Hadamard figure of merit.
    Fh {
        #[arg(long, default_value_t = 60)]
        grid: usize,
        #[arg(long, default_value_t = 5000)]
        refine: usize,
    },
    /// The 3-point simplex-3-design cost over the admissible window.
    Simplex3 {
        /// Evaluate at a single angle instead of scanning.
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
    /// Numerical rank of the fourth-moment matrix.
    Rank {
        #[arg(long)]
        dim: usize,
    },
    /// Solvability of the two-point moment system up to tmax.
    QubitMoments {
        #[arg(long)]
        tmax: u32,
    },
}

#[derive(Args)]
pub(crate) struct PipelineArgs {
    #[arg(long)]
    pub dim: usize,
    /// `exact` or a shot count per basis.
    #[arg(long, default_value = "exact")]
    pub shots: String,
    #[arg(long, env = "CYCDES_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tau_int: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub tau_prep: f64,
}

fn main() {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
