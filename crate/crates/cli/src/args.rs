//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyplat::coxgroup::{DEFAULT_CENTRALIZER_MAXLEN, DEFAULT_ORDER_CAP};

pub const DEFAULT_ISOTROPY_HEIGHT: u64 = 64;

/// Exact computations for hyperbolic reflection groups and arithmetic lattices.
///
/// Diagram inputs are JSON files or `builtin:NAME` for a bundled diagram
/// (six-cycle-simplex, triangle-246, triangle-237, lanner-435, dotted-pair).
/// HYPLAT_PRECISION_BITS sets the starting precision of interval sign
/// evaluation (default 128).
#[derive(Debug, Parser)]
#[command(name = "hyplat", version)]
pub struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram matrix, fields, signatures, Vinberg criterion and vertex types.
    Analyze(AnalyzeArgs),
    /// Fixed subspace of a diagram symmetry, its centralizer and induced orders.
    Fixsub(FixsubArgs),
    /// Order of a word in the geometric representation.
    Order(OrderArgs),
    /// Signature, admissibility and rational isotropy of a quadratic form.
    Form(FormArgs),
    /// Quaternion algebras.
    #[command(subcommand)]
    Quat(QuatCommand),
    /// Skew-Hermitian forms over quaternion algebras.
    #[command(subcommand)]
    Skewherm(SkewCommand),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Diagram file or builtin:NAME.
    pub diagram: String,
}

#[derive(Debug, Args)]
pub struct FixsubArgs {
    /// Diagram file or builtin:NAME.
    pub diagram: String,
    /// Diagram automorphism in cycle notation, e.g. "(a b)(c d)".
    #[arg(long, default_value = "")]
    pub perm: String,
    /// Comma-separated words whose induced actions are reported.
    #[arg(long, value_delimiter = ',')]
    pub generators: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_CENTRALIZER_MAXLEN)]
    pub centralizer_maxlen: usize,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: u32,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Diagram file or builtin:NAME.
    pub diagram: String,
    /// Word in the node names, e.g. "abab".
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: u32,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    /// Form file: {"field": [2], "matrix": [["1", "0"], ["0", "-sqrt(2)"]]}.
    pub form: PathBuf,
    /// Largest max-norm of integer vectors tried in the isotropy search.
    #[arg(long, default_value_t = DEFAULT_ISOTROPY_HEIGHT)]
    pub isotropy_height: u64,
    /// Basis file [["1", "0", "0"], ...]; reports the involution fixing its span.
    #[arg(long)]
    pub subspace: Option<PathBuf>,
}

/// `-a A -b B` or `--algebra "D(A,B)"`.
#[derive(Debug, Args)]
pub struct AlgebraArgs {
    #[arg(short = 'a', allow_hyphen_values = true, requires = "b", conflicts_with = "algebra")]
    pub a: Option<String>,
    #[arg(short = 'b', allow_hyphen_values = true, requires = "a")]
    pub b: Option<String>,
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum QuatCommand {
    /// Local Hilbert symbols, splitting per embedding and the division verdict.
    Symbol(AlgebraArgs),
    /// Whether a quaternion gives an involution in the projective group.
    PslInvolution {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Coordinates "w,x,y,z".
        #[arg(short = 'q', allow_hyphen_values = true)]
        q: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SkewCommand {
    /// Validation, per-embedding signatures and admissibility.
    Analyze {
        form: PathBuf,
    },
    /// The involution fixing a submodule, with the restricted signature.
    Involution {
        form: PathBuf,
        /// Vectors file [[{"w": "1"}, {}], ...] spanning the submodule.
        #[arg(long)]
        submodule: PathBuf,
    },
}
