//! Argument surface: one derive struct per subcommand plus the shared
//! output options. Matrix syntax is "a,b;c,d" (rows by ';', entries by
//! ','), boxes are "lo..hi,lo..hi", residue tuples and polynomial
//! coefficients are comma-separated integers.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use tml_core::lfun::GChoice;

#[derive(Parser)]
#[command(
    name = "tml",
    version,
    about = "Toroidal moment lab: exponential sums, toric counts and \
             second moments of Dirichlet L-functions over prime fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Second moment M_{a,b}(q) for a single prime modulus
    Moment(MomentArgs),
    /// M_{a,b}(q) across a prime range or an explicit modulus list
    Sweep(SweepArgs),
    /// Normalized torus sums T~_{a,b}(u; q)
    Expsum(ExpsumArgs),
    /// Mean square of T_A(u) over u against |H_A| / q^{k-rank}
    Meansquare(MeansquareArgs),
    /// Box counts of toric congruences (brute, lattice, or seeded fuzz)
    Count(CountArgs),
    /// Twisted moment at the smallest root of a polynomial mod q
    Roottwist(RoottwistArgs),
    /// Central values L(1/2, chi)
    Lvalue(LvalueArgs),
}

/// Data-table format; field names are identical in both.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Test function G for the functional-equation engine.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GArg {
    Exp1,
    Exp2,
}

impl From<GArg> for GChoice {
    fn from(g: GArg) -> GChoice {
        match g {
            GArg::Exp1 => GChoice::Exp1,
            GArg::Exp2 => GChoice::Exp2,
        }
    }
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output format of the data table
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the data table to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MethodArgs {
    /// Moment strategy: exact | afe
    #[arg(long, default_value = "exact")]
    pub method: String,

    /// Functional-equation split X = x_factor * q (afe method only)
    #[arg(long, default_value_t = 1.0)]
    pub x_factor: f64,

    /// Test function for the afe method
    #[arg(long, value_enum, default_value_t = GArg::Exp1)]
    pub g: GArg,
}

#[derive(Args)]
pub struct MomentArgs {
    /// Prime modulus
    #[arg(long)]
    pub q: u64,

    /// First exponent a (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,

    /// Second exponent b (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,

    #[command(flatten)]
    pub method: MethodArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("range").required(true).args(["qmin", "q_list"]))]
pub struct SweepArgs {
    /// First exponent a (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,

    /// Second exponent b (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,

    /// Lower endpoint of the prime range (>= 3)
    #[arg(long, requires = "qmax")]
    pub qmin: Option<u64>,

    /// Upper endpoint of the prime range
    #[arg(long, requires = "qmin")]
    pub qmax: Option<u64>,

    /// Explicit comma-separated modulus list; non-prime entries are
    /// flagged in the output rather than aborting the sweep
    #[arg(long, conflicts_with_all = ["qmin", "qmax"])]
    pub q_list: Option<String>,

    /// Worker threads for the sweep
    #[arg(long, env = "TML_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,

    #[command(flatten)]
    pub method: MethodArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("target").required(true).args(["u", "all"]))]
pub struct ExpsumArgs {
    /// Prime modulus
    #[arg(long)]
    pub q: u64,

    /// First exponent a (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,

    /// Second exponent b (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,

    /// Single target residue u (nonzero mod q)
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<i64>,

    /// All residues u = 1..q-1, with a |T~| summary on stderr
    #[arg(long)]
    pub all: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct MeansquareArgs {
    /// Prime modulus
    #[arg(long)]
    pub q: u64,

    /// Exponent matrix A, rows by ';', entries by ',' (e.g. "1,-1")
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: String,

    #[command(flatten)]
    pub output: OutputArgs,
}

/// Counting strategy for `count`.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Brute,
    Lattice,
    Both,
}

#[derive(Args)]
pub struct CountArgs {
    /// Prime modulus (ignored under --fuzz)
    #[arg(long)]
    pub q: Option<u64>,

    /// Single-row exponent matrix (e.g. "1,-1"); lattice mode needs
    /// exactly one +1 and one -1 entry
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,

    /// Target residues, one per coordinate (e.g. "1,1")
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,

    /// Box "lo..hi,lo..hi", one interval per coordinate
    #[arg(long = "box", allow_hyphen_values = true)]
    pub box_spec: Option<String>,

    /// Counting strategy: brute counts the coset u*H_A in (F_q^x)^k,
    /// lattice counts the plain congruence u_i x_i = u_j x_j in the box
    #[arg(long, value_enum, default_value_t = CountMode::Brute)]
    pub mode: CountMode,

    /// Self-test: this many seeded random instances, brute vs lattice;
    /// any disagreement is a numerical failure (exit 3)
    #[arg(long)]
    pub fuzz: Option<u64>,

    /// Seed for the fuzz corpus
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("where").required(true).args(["q", "qmin"]))]
pub struct RoottwistArgs {
    /// Polynomial coefficients, constant term first (e.g. "1,0,1" for
    /// x^2+1); must be irreducible over Q of degree >= 2
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,

    /// Single prime modulus
    #[arg(long)]
    pub q: Option<u64>,

    /// Lower endpoint of a prime range (>= 3); reports |value| decay
    #[arg(long, requires = "qmax", conflicts_with = "q")]
    pub qmin: Option<u64>,

    /// Upper endpoint of the prime range
    #[arg(long, requires = "qmin", conflicts_with = "q")]
    pub qmax: Option<u64>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("which").required(true).args(["j", "all"]))]
pub struct LvalueArgs {
    /// Prime modulus
    #[arg(long)]
    pub q: u64,

    /// Character index j (mod q-1)
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<i64>,

    /// All q-1 characters via the batch transform
    #[arg(long)]
    pub all: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}
