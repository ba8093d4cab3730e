//! Thin argument layer: clap structs are folded into a `RunConfig` and
//! handed to the library. Exit codes: 0 success, 1 numeric failure
//! honestly reported, 2 usage or domain error.

use clap::{Args, Parser, Subcommand};
use tailasym::config::{self, Format, RunConfig};

/// Second-order tail asymptotics for deflated risks X = R·S.
#[derive(Parser)]
#[command(name = "tailasym", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tail approximations P(X > x) on an x grid
    Approx(ApproxArgs),
    /// Approximations next to quadrature ground truth, with error ratios
    Compare(ApproxArgs),
    /// Value-at-Risk approximations on a probability grid
    Var(VarArgs),
    /// Tail probability estimator path over a k range
    Estimate(EstimateArgs),
    /// Aggregated two-risk tail: expansion plus optional Monte Carlo check
    Aggregate(AggregateArgs),
    /// Draw reproducible (r, s, x) samples
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Risk model, e.g. pareto:alpha=2,theta=1
    #[arg(long = "r", value_name = "SPEC")]
    r: String,
    /// Deflator model on (0,1), e.g. beta:a=1,b=2
    #[arg(long = "s", value_name = "SPEC")]
    s: String,
}

#[derive(Args)]
struct OutArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when absent)
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    models: ModelArgs,
    /// Evaluation grid: comma list or lo:hi:count[:log]
    #[arg(long = "x", value_name = "GRID")]
    x: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VarArgs {
    #[command(flatten)]
    models: ModelArgs,
    /// Probability levels: comma list or lo:hi:count[:log]
    #[arg(long = "p", value_name = "GRID")]
    p: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct EstimateArgs {
    /// Risk model; with --s enables self-simulation and the true-p column
    #[arg(long = "r", value_name = "SPEC")]
    r: Option<String>,
    /// Deflator model
    #[arg(long = "s", value_name = "SPEC")]
    s: Option<String>,
    /// Threshold the tail probability is estimated at (one value)
    #[arg(long = "x", value_name = "X")]
    x: String,
    /// Inclusive order-statistic range lo:hi
    #[arg(long = "k", value_name = "LO:HI")]
    k: String,
    /// heavy_rs | heavy_x | weibull_rs | weibull_x
    #[arg(long, value_name = "NAME")]
    method: String,
    /// Sample size for self-simulation
    #[arg(long)]
    n: Option<usize>,
    /// Seed for self-simulation
    #[arg(long)]
    seed: Option<u64>,
    /// Input sample CSV with r,s columns (instead of self-simulation)
    #[arg(long, value_name = "PATH")]
    data: Option<String>,
    /// Path for the estimator path table; a JSON summary lands next to it
    #[arg(long, value_name = "PATH")]
    out: String,
    /// Output format of the path table
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct AggregateArgs {
    /// Gumbel- or Weibull-domain risk model
    #[arg(long = "r", value_name = "SPEC")]
    r: String,
    /// Beta deflator, e.g. beta:a=2,b=2
    #[arg(long = "s", value_name = "SPEC")]
    s: String,
    /// Mixing weight in [0,1]
    #[arg(long, value_name = "L")]
    lambda: f64,
    /// Levels (Gumbel risk) or endpoint distances (bounded risk)
    #[arg(long = "x", value_name = "GRID")]
    x: String,
    /// Sign masses pp,pm,mp,mm; default fair independent
    #[arg(long, value_name = "PP,PM,MP,MM")]
    signs: Option<String>,
    /// Monte Carlo draws for the deflator-tail check columns
    #[arg(long, value_name = "DRAWS")]
    mc: Option<u64>,
    /// Seed for the Monte Carlo columns
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    models: ModelArgs,
    /// Sample size
    #[arg(long)]
    n: usize,
    /// Seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

fn approx_like(name: &str, a: ApproxArgs) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::new(name);
    cfg.model_r = Some(a.models.r);
    cfg.model_s = Some(a.models.s);
    cfg.x = Some(config::parse_grid(&a.x)?);
    cfg.format = a.out.format;
    cfg.out = a.out.out;
    Ok(cfg)
}

fn build_config(command: Command) -> Result<RunConfig, String> {
    Ok(match command {
        Command::Approx(a) => approx_like("approx", a)?,
        Command::Compare(a) => approx_like("compare", a)?,
        Command::Var(a) => {
            let mut cfg = RunConfig::new("var");
            cfg.model_r = Some(a.models.r);
            cfg.model_s = Some(a.models.s);
            cfg.p = Some(config::parse_grid(&a.p)?);
            cfg.format = a.out.format;
            cfg.out = a.out.out;
            cfg
        }
        Command::Estimate(a) => {
            let mut cfg = RunConfig::new("estimate");
            cfg.model_r = a.r;
            cfg.model_s = a.s;
            cfg.x = Some(config::parse_grid(&a.x)?);
            cfg.k = Some(config::parse_k_range(&a.k)?);
            cfg.method = Some(a.method);
            cfg.n = a.n;
            cfg.seed = a.seed;
            cfg.data = a.data;
            cfg.format = a.format;
            cfg.out = Some(a.out);
            cfg
        }
        Command::Aggregate(a) => {
            let mut cfg = RunConfig::new("aggregate");
            cfg.model_r = Some(a.r);
            cfg.model_s = Some(a.s);
            cfg.lambda = Some(a.lambda);
            cfg.x = Some(config::parse_grid(&a.x)?);
            cfg.signs = a.signs.as_deref().map(config::parse_signs).transpose()?;
            cfg.mc = a.mc;
            cfg.seed = a.seed;
            cfg.format = a.out.format;
            cfg.out = a.out.out;
            cfg
        }
        Command::Simulate(a) => {
            let mut cfg = RunConfig::new("simulate");
            cfg.model_r = Some(a.models.r);
            cfg.model_s = Some(a.models.s);
            cfg.n = Some(a.n);
            cfg.seed = Some(a.seed);
            cfg.format = a.out.format;
            cfg.out = a.out.out;
            cfg
        }
    })
}

fn main() {
    let cli = Cli::parse();
    let cfg = match build_config(cli.command) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };
    if let Err(failure) = tailasym::run(&cfg) {
        eprintln!("error: {}", failure.message());
        std::process::exit(failure.exit_code());
    }
}
