mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "smale",
    version,
    about = "Parry measure experiments on shifts of finite type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph JSON file.
    #[arg(long)]
    graph: PathBuf,
}

/// Unstable rays `Σ^u_n(x)` and stable rays `Σ^s_m(y)`. Repeat `--x`/`-n`
/// (and `--y`/`-m`) to form disjoint unions; a single `-n` applies to all.
#[derive(Debug, Args)]
struct RayArgs {
    #[arg(long = "x")]
    x: Vec<PathBuf>,
    #[arg(short = 'n', allow_negative_numbers = true)]
    n: Vec<i64>,
    #[arg(long = "y")]
    y: Vec<PathBuf>,
    #[arg(short = 'm', allow_negative_numbers = true)]
    m: Vec<i64>,
}

#[derive(Debug, Args)]
struct CapArg {
    /// Enumeration cap.
    #[arg(long, env = "SMALE_CAP")]
    cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Irreducibility, period, cyclic classes and entropy.
    Analyze(GraphArg),
    /// Perron eigenvalue and normalized eigenvectors.
    Perron(GraphArg),
    /// Parry mass of one centered cylinder, or of all with `l <= l_max`.
    Parry {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated edge ids of even length.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 1)]
        l_max: usize,
    },
    /// Exact `#h^k`, optionally listing the points.
    HeteroCount {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rays: RayArgs,
        #[arg(long)]
        k: u64,
        /// List every heteroclinic point.
        #[arg(long)]
        points: bool,
        #[command(flatten)]
        cap: CapArg,
    },
    /// `λ^(-2k) #h^k` and `log #h^k / 2k` for every k up to `k_max`.
    HeteroSeries {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rays: RayArgs,
        #[arg(long)]
        k_max: u64,
    },
    /// Empirical measure `μ^k` against the Parry measure.
    WeakStar {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rays: RayArgs,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 2)]
        l_max: usize,
    },
    /// Period-I growth series with both normalizations.
    IrreducibleSeries {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rays: RayArgs,
        #[arg(long)]
        k_max: u64,
    },
    /// Periodic-point measure of all orbits of least period `<= max_period`.
    Periodic {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        max_period: usize,
        #[arg(long, default_value_t = 2)]
        l_max: usize,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Periodic, heteroclinic and Parry masses side by side.
    Compare {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rays: RayArgs,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_period: usize,
        #[arg(long, default_value_t = 2)]
        l_max: usize,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Resolving type and periodic fiber sizes of a one-block code.
    CodeCheck {
        /// Code JSON file.
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 8)]
        period_bound: usize,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Pushforward of the domain Parry measure, plus ray measures when
    /// `--x`/`--y` are given.
    Pushforward {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 2)]
        l_max: usize,
        #[command(flatten)]
        rays: RayArgs,
    },
}

/// Everything that ends a run early, by exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Cap(String),
    Empty(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Empty(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(s) | Failure::Cap(s) | Failure::Empty(s) => s,
        }
    }
}

impl From<smale::Error> for Failure {
    fn from(e: smale::Error) -> Self {
        match e {
            smale::Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            smale::Error::EmptyHeteroclinicSet(_) => Failure::Empty(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli.command).and_then(|mut t| {
        if let Some(meta) = t.meta.as_object_mut() {
            meta.insert(
                "format".into(),
                format!("{:?}", cli.format).to_lowercase().into(),
            );
        }
        t.emit(cli.format, cli.output.as_deref())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("smale: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
