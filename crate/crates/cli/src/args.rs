use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Words, braids, extremal length and counting bounds for maps into the
/// twice punctured plane.
#[derive(Debug, Parser)]
#[command(name = "fbt", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced words on a1, a2
    #[command(subcommand)]
    Word(WordCmd),
    /// Braids in B3 and B3 modulo its center
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Three-point configurations and loop decoders
    #[command(subcommand)]
    Config3(Config3Cmd),
    /// Extremal length of annuli and rectangles
    #[command(subcommand)]
    Conformal(ConformalCmd),
    /// Lattice kernels and the dbar construction on the torus with a hole
    #[command(subcommand)]
    Dbar(DbarCmd),
    /// Counting bounds in log space
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum WordCmd {
    /// L-, L+ and syllables of a word
    Linv {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// All reduced words with L- at most the budget
    Enum {
        /// Budget Y; accepts decimals and `log<x>`
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        budget: f64,
        #[arg(long, value_parser = parse_real)]
        cap: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cyclic canonical form, or the canonical form of a monodromy tuple
    /// when `--g` and `--m` are given
    Canon {
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long, requires = "m")]
        g: Option<u32>,
        #[arg(long, requires = "g")]
        m: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BraidCmd {
    /// Normal form
    Nf {
        #[arg(allow_hyphen_values = true)]
        braid: String,
    },
    /// The word theta(b) with its L- and L+
    Theta {
        #[arg(allow_hyphen_values = true)]
        braid: String,
    },
    /// Elements of B3 modulo the center with L-(theta) at most the budget
    Census {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        budget: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Extremal-length brackets: the lower bound for a braid and, given
    /// `--lambda`, the admissibility test; with `--k` and `--k2`, the
    /// two-factor inequality
    Bracket {
        #[arg(allow_hyphen_values = true)]
        braid: Option<String>,
        #[arg(long, value_parser = parse_real)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["k2", "lambda"])]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "k")]
        k2: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Config3Cmd {
    /// Braid traced by a loop of triples (CSV t,re1,im1,re2,im2,re3,im3)
    DecodeBraid { file: PathBuf },
    /// Word traced by a loop in the twice punctured plane (CSV t,re,im)
    DecodeWord { file: PathBuf },
    /// Whether three points are collinear; points as `re,im`
    InH {
        #[arg(num_args = 3, required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, value_parser = parse_real, default_value = "1e-9")]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Staircase,
    Fractional,
}

#[derive(Debug, Subcommand)]
pub enum ConformalCmd {
    /// Closed-form extremal length of a domain spec (JSON file or inline)
    Lambda { spec: String },
    /// Grid solve of a domain spec
    Grid {
        spec: String,
        #[arg(long, value_parser = parse_real)]
        h: f64,
        /// Boundary treatment for round annuli
        #[arg(long, value_enum, default_value = "fractional")]
        rule: Rule,
        #[arg(long, value_parser = parse_real, default_value = "1e-10")]
        tol: f64,
        #[arg(long, default_value_t = 200_000)]
        max_iter: usize,
        /// Write node potentials as CSV x,y,u
        #[arg(long)]
        nodes: Option<PathBuf>,
    },
    /// Upper bounds for the torus with a rectangular hole
    TorusBounds {
        #[arg(long, value_parser = parse_real)]
        alpha: f64,
        #[arg(long, value_parser = parse_real)]
        sigma: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum DbarCmd {
    /// Truncated lattice kernels at a point
    Kernel {
        #[arg(long, value_parser = parse_real, default_value = "1")]
        alpha: f64,
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        im: f64,
    },
    /// Solve for f and run the dbar, holomorphy, periodicity and sup checks
    Solve(SolveArgs),
    /// Build h = g1 - f for a target a1^n or a2^n and decode its monodromy
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub alpha: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.1")]
    pub delta: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.01")]
    pub epsilon: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 400)]
    pub quad_nx: usize,
    #[arg(long, default_value_t = 400)]
    pub quad_ny: usize,
    /// Map g is the demo map for this target
    #[arg(long, default_value = "a1^2", allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, value_parser = parse_real, default_value = "0.5")]
    pub rho: f64,
    #[arg(long, value_parser = parse_real)]
    pub c1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub c2: Option<f64>,
    /// Write f on the cross grid as CSV re_z,im_z,re_f,im_f
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub alpha: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.01")]
    pub sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, value_parser = parse_real, default_value = "0.1")]
    pub delta: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.5")]
    pub rho: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 400)]
    pub quad_nx: usize,
    #[arg(long, default_value_t = 400)]
    pub quad_ny: usize,
    #[arg(long, default_value_t = 400)]
    pub loop_samples: usize,
    /// Write (z, f) samples as CSV re_z,im_z,re_f,im_f
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Irreducible maps into the thrice punctured sphere
    Thm1 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_real, required_unless_present = "lambda3", conflicts_with = "lambda3")]
        lambda4: Option<f64>,
        /// Only for a torus with one hole
        #[arg(long, value_parser = parse_real)]
        lambda3: Option<f64>,
    },
    /// Irreducible (1,1)-bundles
    Thm2 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_real)]
        lambda8: f64,
    },
    /// Irreducible (0,3)-bundles with a section
    Thm3 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_real)]
        lambda8: f64,
    },
    /// Torus with a hole: the upper bound, or the parametric lower bound
    Prop1a {
        #[arg(long, value_parser = parse_real)]
        alpha: f64,
        #[arg(long, value_parser = parse_real)]
        sigma: f64,
        #[arg(long, value_enum, default_value = "upper")]
        direction: Direction,
        /// Exponent constant of the lower bound (required for `lower`)
        #[arg(long, value_parser = parse_real)]
        c_big: Option<f64>,
        /// Prefactor of the lower bound (required for `lower`)
        #[arg(long, value_parser = parse_real)]
        c_small: Option<f64>,
    },
    /// Planar domains: both parametric bounds; all constants are required
    Prop1b {
        #[arg(long, value_parser = parse_real)]
        sigma: f64,
        #[arg(long, value_parser = parse_real)]
        c1: f64,
        #[arg(long, value_parser = parse_real)]
        c2: f64,
        #[arg(long, value_parser = parse_real)]
        c1p: f64,
        #[arg(long, value_parser = parse_real)]
        c2p: f64,
    },
    /// CSV sweep over comma-separated parameter lists
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Thm1,
    Thm2,
    Thm3,
    Prop1aUpper,
    Reducible,
    Words,
    Census,
    /// Random (g, m, lambda) tuples with the thm1, thm2 and thm3 bounds
    Random,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub budget: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A decimal number, or `log<x>` / `ln<x>` for a natural logarithm.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let v = if let Some(rest) = t.strip_prefix("log").or_else(|| t.strip_prefix("ln")) {
        let x: f64 = rest.parse().map_err(|_| format!("bad number {s:?}"))?;
        if x.is_nan() || x <= 0.0 {
            return Err(format!("log of a non-positive number in {s:?}"));
        }
        x.ln()
    } else {
        t.parse().map_err(|_| format!("bad number {s:?}"))?
    };
    if !v.is_finite() {
        return Err(format!("non-finite number {s:?}"));
    }
    Ok(v)
}
