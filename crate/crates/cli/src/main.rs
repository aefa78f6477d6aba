//! `modqec`: build product codes, compute their parameters, check them
//! against a modular layout and export their check matrices.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "modqec", version, about = "Quantum LDPC codes from products of chain complexes")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a seed complex.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Combine two complexes.
    #[command(subcommand)]
    Product(ProductCmd),
    /// Derive a modular layout from a slot complex and a module complex.
    Layout(LayoutArgs),
    /// Code parameters of one grade.
    Params(ParamsArgs),
    /// Distance of one grade.
    #[command(subcommand)]
    Distance(DistanceCmd),
    /// Check that every check of a product acts along layout edges.
    VerifyArch(VerifyArgs),
    /// Qubit roles around the loops of a repetition ⊗ surface product.
    Loops(LoopsArgs),
    /// Write a check matrix or boundary in an interchange format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TopologyArg {
    Open,
    Cyclic,
}

#[derive(Debug, Subcommand)]
pub enum BuildCmd {
    /// Repetition code.
    Repetition {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "cyclic")]
        topology: TopologyArg,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Planar surface code.
    Surface {
        #[arg(long)]
        length: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random sparse parity-check matrix.
    RandomLdpc {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Required rank of the matrix.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random quasi-cyclic matrix with a free cyclic symmetry; the shape
    /// flags describe the matrix before lifting.
    GroupLdpc {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        group_order: usize,
        /// Required rank of the lifted matrix.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub max_row_wt: usize,
    #[arg(long)]
    pub max_col_wt: usize,
    #[arg(long)]
    pub min_row_wt: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub min_col_wt: usize,
}

#[derive(Debug, Subcommand)]
pub enum ProductCmd {
    /// Tensor product.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Balanced product over a cyclic group. Actions are read from the
    /// input documents, or taken as block shifts of the given order.
    Balanced {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        group_order: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fiber-bundle product of a 2-term base and a fiber.
    Fiber {
        base: PathBuf,
        fiber: PathBuf,
        /// Connection document; identity twists when omitted.
        #[arg(long, conflicts_with = "derive")]
        connection: Option<PathBuf>,
        /// Treat BASE as a symmetric complex and derive the quotient base
        /// and connection from the group actions.
        #[arg(long)]
        derive: bool,
        #[arg(long, requires = "derive")]
        group_order: Option<usize>,
        /// Where to write the derived quotient base.
        #[arg(long, requires = "derive")]
        base_out: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    /// Complex whose cells become the qubit slots of each module.
    #[arg(long)]
    pub slots: PathBuf,
    /// Complex whose cells become the modules.
    #[arg(long)]
    pub modules: PathBuf,
    /// Twists for inter-module links: a connection document or a product
    /// document carrying one.
    #[arg(long)]
    pub connection: Option<PathBuf>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    pub complex: PathBuf,
    #[arg(long)]
    pub qubit_grade: usize,
    /// Factors of the product, for the homology cross-check.
    #[arg(long, requires = "right")]
    pub left: Option<PathBuf>,
    #[arg(long, requires = "left")]
    pub right: Option<PathBuf>,
    /// Group order for balanced factors without an action in their documents.
    #[arg(long)]
    pub group_order: Option<usize>,
    /// Row and column weight limit for the audit.
    #[arg(long, default_value_t = 10)]
    pub ldpc_bound: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradeArgs {
    pub complex: PathBuf,
    #[arg(long)]
    pub grade: usize,
    /// Measure the cohomological distance instead.
    #[arg(long)]
    pub cohomological: bool,
    /// Report to create or extend.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DistanceCmd {
    /// Exact minimum weight by exhaustive search.
    Exhaustive {
        #[command(flatten)]
        target: GradeArgs,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Exact distance by shortest-cycle search, for grades whose boundary
    /// has at most two ones per column.
    Graphlike {
        #[command(flatten)]
        target: GradeArgs,
        #[arg(long, default_value_t = 1 << 24)]
        max_states: u64,
    },
    /// Upper bound from random information sets.
    Randomized {
        #[command(flatten)]
        target: GradeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Exact product distance from exact factor distances.
    Zp {
        /// Any-length factor A.
        #[arg(long)]
        left: PathBuf,
        /// 2-term factor B.
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        grade: usize,
        #[arg(long)]
        cohomological: bool,
        /// Exact distances of A, grade 0 first, e.g. `inf,20,inf`.
        /// Computed by the graphlike or exhaustive search when omitted.
        #[arg(long, value_delimiter = ',')]
        left_distances: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        right_distances: Option<Vec<String>>,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FactorArg {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub product: PathBuf,
    pub layout: PathBuf,
    /// Product factor that labels the modules (default: the fiber-bundle
    /// base, otherwise the right factor).
    #[arg(long, value_enum)]
    pub module_factor: Option<FactorArg>,
    /// Full assignment with every violation.
    #[arg(long)]
    pub details: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LoopsArgs {
    pub product: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub qubit_grade: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Alist,
    Mtx,
    Json,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub complex: PathBuf,
    #[arg(long, value_enum)]
    pub format: FormatArg,
    /// `hx`, `hz` or `boundary:<grade>`.
    #[arg(long)]
    pub which: String,
    /// Qubit grade for `hx` and `hz`.
    #[arg(long, default_value_t = 1)]
    pub qubit_grade: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
