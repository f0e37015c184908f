mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shearer_core::{Backend, BigRational};

use input::{GraphArgs, OptGraphArgs};
use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] shearer_core::Error),
}

impl CliError {
    /// 2 for malformed input, 3 for a size cap, 4 for a violated precondition.
    fn exit_code(&self) -> u8 {
        use shearer_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                E::Parse(_)
                | E::LoopEdge(_)
                | E::IndexOutOfRange { .. }
                | E::DimensionMismatch { .. }
                | E::InvalidDist(_)
                | E::InvalidParameter(_) => 2,
                E::CapExceeded { .. } => 3,
                _ => 4,
            },
        }
    }
}

/// Shearer's measure, its region, sufficient conditions and domination
/// oracles on finite graphs.
#[derive(Parser, Debug)]
#[command(name = "shearer", version)]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, env = "SHEARER_BACKEND", default_value = "float", value_parser = parse_backend)]
    pub backend: Backend,
    /// Output format; records default to json, tables to csv.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: shearer_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum XiMethod {
    Dc,
    Enumerate,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DomMethod {
    Strassen,
    Upset,
    Necessary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeasureSource {
    Shearer,
    Counterexample,
    Halfball,
    File,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GridOp {
    ShapeOvoep,
    AEstimate,
    Spiral,
    Telescoping,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepOf {
    Xi,
    Member,
    Boundary,
    Sigma,
    Thm2,
    Lll,
    Fp,
    Density,
    AEstimate,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate Ξ_G(p).
    Xi {
        #[command(flatten)]
        graph: GraphArgs,
        /// Scalar or JSON array.
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "dc")]
        method: XiMethod,
    },
    /// Region status of p with the least offending subset.
    Member {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
    },
    /// For p outside the interior: where the segment to the all-ones vector enters it.
    Boundary {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
    },
    /// Emit the law of Shearer(G, p) as a Dist file.
    Measure {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
    },
    /// Q_W^v(p) = Ξ(W ∪ v) / Ξ(W).
    Ovoep {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
        /// Comma-separated vertex list; empty for ∅.
        #[arg(long, default_value = "")]
        w: String,
        #[arg(long)]
        v: usize,
    },
    /// Closed forms and sufficient conditions.
    Bounds {
        /// p_sh_tree, p_sh_kfuzz, zd_lower, lss_lower, lss_kfuzz, jump_lower,
        /// kfuzz_jump_upper, thm2, lll, fp, halfball, intrinsic.
        #[arg(long)]
        op: String,
        #[command(flatten)]
        graph: OptGraphArgs,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        /// Vertices marked as lying in infinite components (thm2).
        #[arg(long, default_value = "")]
        infinite: String,
        /// Candidate witness vector for lll / fp.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Test dY ⪰ dX.
    Dominate {
        #[arg(long)]
        y: PathBuf,
        #[arg(long, conflicts_with = "product", required_unless_present = "product")]
        x: Option<PathBuf>,
        /// Compare against the product law with these marginals.
        #[arg(long)]
        product: Option<String>,
        #[arg(long, value_enum, default_value = "strassen")]
        method: DomMethod,
    },
    /// Largest c with law ⪰ Π_c.
    Sigma {
        #[arg(long, value_enum, default_value = "shearer")]
        measure: MeasureSource,
        #[command(flatten)]
        graph: OptGraphArgs,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// The non-dominating field with marginals p.
    Counterexample {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
        /// Also compute its dominated value.
        #[arg(long)]
        sigma: bool,
    },
    /// Draw configurations (bit strings, vertex 0 first).
    Sample {
        #[command(flatten)]
        graph: OptGraphArgs,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Sequential coupling of Shearer(G, p) above Π_x.
    Russo {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: String,
        /// Product marginals; defaults to the thm2 vector.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Include every draw in the output.
        #[arg(long)]
        draws: bool,
    },
    /// Operations on the square lattice.
    Grid {
        #[arg(long, value_enum)]
        op: GridOp,
        #[arg(long)]
        p: Option<String>,
        /// Box side N.
        #[arg(long)]
        side: Option<usize>,
        /// Shape n,k,l.
        #[arg(long)]
        shape: Option<String>,
        /// Caps on n,k,l.
        #[arg(long, default_value = "4,4,4")]
        caps: String,
    },
    /// Run one command over a homogeneous p range, one row per p.
    Sweep {
        #[arg(long, value_enum)]
        of: SweepOf,
        #[command(flatten)]
        graph: OptGraphArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        step: String,
        #[arg(long)]
        side: Option<usize>,
        #[arg(long, default_value = "4,4,4")]
        caps: String,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let artifact = match cli.backend {
        Backend::Float => commands::run::<f64>(cli)?,
        Backend::Rational => commands::run::<BigRational>(cli)?,
    };
    output::emit(&artifact.render(cli.format), cli.output.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
