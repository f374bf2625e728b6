mod commands;
mod failure;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::failure::Failure;
use crate::output::Format;
use crate::settings::{ConfigFile, Grid, RealList};

/// Merged regularization products of one-dimensional distributions.
///
/// Every command streams one JSON object per line by default; each record
/// echoes the resolved configuration. Exit status: 0 success, 1 verification
/// failure, 2 usage or validity error, 3 numeric failure.
#[derive(Debug, Parser)]
#[command(name = "distmul", version)]
struct Cli {
    /// Read `key=value` defaults from FILE; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// One JSON object per line (default).
    #[arg(long, global = true, conflicts_with_all = ["csv", "human"])]
    json: bool,
    /// CSV with a header row, preceded by a `# config:` comment line.
    #[arg(long, global = true, conflicts_with = "human")]
    csv: bool,
    /// Plain `key=value` lines.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalization F and inverse moments A_j of the mollifier Φ_m.
    #[command(after_help = "CSV columns: m,j,A_j,F")]
    Moments(MomentsArgs),
    /// The analytic regularization T_red(x, ε) on a grid.
    #[command(
        after_help = "CSV columns: x,value,from_cauchy (from_cauchy is blank for continuous T)"
    )]
    Red(RedArgs),
    /// The mollified sequence (T * δ_n)(x) on a grid.
    #[command(after_help = "CSV columns: x,value")]
    Seq(SeqArgs),
    /// Terms and limit of (S ⊗ T)_(α,β)(Ψ), checked against the closed form when one exists.
    #[command(
        after_help = "CSV columns: n,term,value,error_estimate,converged,expected,status (one row per term)"
    )]
    Product(ProductArgs),
    /// All six tabulated δ-products at their critical and one supercritical α, plus the cross-relation.
    #[command(
        after_help = "CSV columns: check,l,k,alpha,regime,expected,measured,error_estimate,converged,allowed,status"
    )]
    VerifyTable(VerifyArgs),
    /// Products of two continuous functions against the ordinary integral ∫ f g Ψ.
    #[command(
        after_help = "CSV columns: alpha,beta,limit,direct,difference,error_estimate,converged,status"
    )]
    Consistency(ConsistencyArgs),
    /// Scattering off the point interaction induced by V₀ δ(x) δ(x - d).
    #[command(
        after_help = "CSV columns: k,g,source,energy,r_re,r_im,t_re,t_im,R,T,x,psi_re,psi_im,psi_abs2 \
                      (x and psi_* are filled only with --grid, one row per sample)"
    )]
    Scatter(ScatterArgs),
    /// The pure sequential sequence n^β ∫ Φ(t) Ψ(t/n^β) dt next to the merged δ⊗δ product at α = 2β.
    #[command(after_help = "CSV columns: n,sequential_term,merged_term")]
    DivergeDemo(DivergeArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct MomentsArgs {
    /// Even mollifier exponent (default 6).
    #[arg(long)]
    m: Option<u32>,
    /// Moment index; all of 1..=m when omitted.
    #[arg(long)]
    j: Option<u32>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RedArgs {
    /// Order of δ^(k) (default 0).
    #[arg(long, conflicts_with = "t")]
    k: Option<u32>,
    /// Distribution literal, e.g. `hat:c=0,w=1,h=1`, instead of --k.
    #[arg(long)]
    t: Option<String>,
    /// Regularization width ε > 0.
    #[arg(long)]
    eps: Option<f64>,
    /// Sample points `a:b:step`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<Grid>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SeqArgs {
    /// Order of δ^(k) (default 0).
    #[arg(long, conflicts_with = "t")]
    k: Option<u32>,
    /// Continuous distribution literal instead of --k.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    beta: Option<f64>,
    /// Sequence index n >= 1.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<Grid>,
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// First schedule point (default 4).
    #[arg(long)]
    n0: Option<u64>,
    /// Number of doublings (default 10).
    #[arg(long)]
    steps: Option<u32>,
    /// Convergence / verification tolerance (default 1e-4).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ProductArgs {
    /// Order l of the first factor δ^(l).
    #[arg(long, conflicts_with = "s")]
    l: Option<u32>,
    /// Order k of the second factor δ^(k).
    #[arg(long, conflicts_with = "t")]
    k: Option<u32>,
    /// First factor as a literal (`delta:k=1`, `hat:...`, `parab:...`, `zero:...`).
    #[arg(long)]
    s: Option<String>,
    /// Second factor as a literal.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// Test function literal `bump:c=..,w=..,p=c0;c1;...`.
    #[arg(long)]
    psi: Option<String>,
    #[command(flatten)]
    limit: LimitArgs,
    /// Measure outside the validity conditions (small m, α below critical) without a reference.
    #[arg(long)]
    explore: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    psi: Option<String>,
    #[command(flatten)]
    limit: LimitArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ConsistencyArgs {
    /// First continuous factor (default `parab:c=0,w=2,h=1`).
    #[arg(long)]
    f: Option<String>,
    /// Second continuous factor (default `hat:c=0.25,w=1.5,h=1`).
    #[arg(long)]
    g: Option<String>,
    /// Comma-separated α values (default 1,2,3).
    #[arg(long)]
    alpha: Option<RealList>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    psi: Option<String>,
    #[command(flatten)]
    limit: LimitArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ScatterArgs {
    /// Potential strength V₀.
    #[arg(long = "V0", id = "v0")]
    v0: Option<f64>,
    /// Analytic rate α (default 2β, the critical value).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// Separation of the two δ factors (default 0).
    #[arg(long)]
    d: Option<f64>,
    /// Incoming wavenumber k > 0.
    #[arg(long)]
    k: Option<f64>,
    /// Wavefunction sample points `a:b:step`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<Grid>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct DivergeArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    psi: Option<String>,
    #[command(flatten)]
    limit: LimitArgs,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = if cli.csv {
        Format::Csv
    } else if cli.human {
        Format::Human
    } else {
        Format::Json
    };
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let out = std::io::stdout().lock();
    match cli.command {
        Command::Moments(a) => commands::moments(a, config, format, out),
        Command::Red(a) => commands::red(a, config, format, out),
        Command::Seq(a) => commands::seq(a, config, format, out),
        Command::Product(a) => commands::product(a, config, format, out),
        Command::VerifyTable(a) => commands::verify_table(a, config, format, out),
        Command::Consistency(a) => commands::consistency(a, config, format, out),
        Command::Scatter(a) => commands::scatter(a, config, format, out),
        Command::DivergeDemo(a) => commands::diverge_demo(a, config, format, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("distmul: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
