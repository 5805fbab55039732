//! `heinzlab`: verify operator-mean and Hermite-Hadamard refinement
//! inequalities over seeded random positive definite instances, render chain
//! tables, and scan scalar sharpness boundaries.
//!
//! Exit codes: 0 all checks pass, 1 a comparison failed, 2 usage or
//! configuration error, 3 numerical failure in a kernel.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{apply_config_map, env_seed, parse_config_file, parse_norm_list, RunConfig};
use output::OutputFormat;

#[derive(Debug)]
pub struct CliError {
    message: String,
    exit: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit: 2,
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit: 3,
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError {
            message: format!("i/o error: {e}"),
            exit: 2,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "heinzlab",
    version,
    about = "Numerical verification of operator-mean and Hermite-Hadamard refinement inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run inequality checks over seeded random instances and stream records.
    Verify(VerifyArgs),
    /// Evaluate one chain on one instance and print its stage table.
    Chain(ChainArgs),
    /// Scalar scans: sharpness of the logarithmic-mean bound, ladder convergence.
    Scan(ScanArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file with key=value lines (flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance orders to cycle through (comma separated).
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Base seed; HEINZLAB_SEED supplies the default.
    #[arg(long)]
    seed: Option<u64>,
    /// Condition-number cap for random positive definite instances.
    #[arg(long = "cond-cap")]
    cond_cap: Option<f64>,
    /// Extra norms beside the automatic Ky Fan sweep, e.g. trace,schatten:1.5.
    #[arg(long, value_delimiter = ',')]
    norms: Option<Vec<String>>,
    /// Relative tolerance anchored at max(1, |rhs|).
    #[arg(long)]
    tol: Option<f64>,
    /// Carrier kind: general, hermitian, identity, or diagonal.
    #[arg(long = "x-kind")]
    x_kind: Option<String>,
    /// Force the Heinz weight nu.
    #[arg(long)]
    nu: Option<f64>,
    /// Force the weight alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Force the interval endpoint beta.
    #[arg(long)]
    beta: Option<f64>,
    /// Force the midpoint-ladder depth n.
    #[arg(long = "ladder-n")]
    ladder_n: Option<u32>,
    /// Force the trapezoid-ladder depth m.
    #[arg(long = "ladder-m")]
    ladder_m: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Check ids to run (comma separated), or "all".
    #[arg(long, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// Instances per (id, order) pair.
    #[arg(long)]
    instances: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record format: json-lines or csv.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct ChainArgs {
    /// Chain id, e.g. CHAIN-2.2.1.
    #[arg(long)]
    id: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(subcommand)]
    target: ScanTarget,
}

#[derive(Subcommand)]
enum ScanTarget {
    /// Sweep Heinz weights against the logarithmic mean on a ratio grid.
    Drissi {
        /// Weight grid as start:stop:step.
        #[arg(long = "nu-grid", default_value = "0.05:0.95:0.05")]
        nu_grid: String,
        /// Ratio grid exponent bound: ratios 2^k for k in -p..=p.
        #[arg(long = "ratio-pows", default_value_t = 20)]
        ratio_pows: i32,
    },
    /// Midpoint/trapezoid ladder values closing on the mean integral.
    LadderConvergence {
        #[arg(long, default_value_t = 4.0)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
}

fn build_config(common: &CommonArgs, verify: Option<&VerifyArgs>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(seed) = env_seed()? {
        cfg.seed = seed;
    }
    if let Some(path) = &common.config {
        let map = parse_config_file(path)?;
        apply_config_map(&mut cfg, &map)?;
    }
    if let Some(v) = verify {
        if let Some(suite) = &v.suite {
            cfg.suite = if suite.len() == 1 && suite[0] == "all" {
                Vec::new()
            } else {
                suite.clone()
            };
        }
        if let Some(instances) = v.instances {
            if instances == 0 {
                return Err(CliError::usage("instances must be positive"));
            }
            cfg.instances = instances;
        }
        if let Some(out) = &v.out {
            cfg.out = Some(out.display().to_string());
        }
        if let Some(format) = &v.format {
            cfg.format = OutputFormat::parse(format)?;
        }
    }
    if let Some(orders) = &common.orders {
        if orders.is_empty() || orders.contains(&0) {
            return Err(CliError::usage("orders must be positive"));
        }
        cfg.orders = orders.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(c) = common.cond_cap {
        if c < 1.0 {
            return Err(CliError::usage("cond-cap must be >= 1"));
        }
        cfg.cond_cap = c;
    }
    if let Some(norms) = &common.norms {
        cfg.norms = parse_norm_list(&norms.join(","))?;
    }
    if let Some(tol) = common.tol {
        if !(tol > 0.0) {
            return Err(CliError::usage("tol must be positive"));
        }
        cfg.tol = tol;
    }
    if let Some(x_kind) = &common.x_kind {
        cfg.x_kind =
            heinzlab::suite::XKind::parse(x_kind).map_err(|e| CliError::usage(e.to_string()))?;
    }
    cfg.nu = common.nu.or(cfg.nu);
    cfg.alpha = common.alpha.or(cfg.alpha);
    cfg.beta = common.beta.or(cfg.beta);
    cfg.ladder_n = common.ladder_n.or(cfg.ladder_n);
    cfg.ladder_m = common.ladder_m.or(cfg.ladder_m);
    Ok(cfg)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "grid must be start:stop:step, got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::usage(format!("bad grid start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::usage(format!("bad grid stop '{}'", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::usage(format!("bad grid step '{}'", parts[2])))?;
    if !(step > 0.0) || stop < start {
        return Err(CliError::usage("grid needs step > 0 and stop >= start"));
    }
    let mut grid = Vec::new();
    let mut v = start;
    while v <= stop + 1e-12 {
        grid.push(v);
        v += step;
    }
    if grid.is_empty() {
        return Err(CliError::usage("empty grid"));
    }
    Ok(grid)
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify(args) => {
            let cfg = build_config(&args.common, Some(args))?;
            commands::cmd_verify(&cfg)
        }
        Command::Chain(args) => {
            let cfg = build_config(&args.common, None)?;
            commands::cmd_chain(&args.id, &cfg)
        }
        Command::Scan(args) => match &args.target {
            ScanTarget::Drissi {
                nu_grid,
                ratio_pows,
            } => {
                let grid = parse_grid(nu_grid)?;
                commands::cmd_scan_drissi(&grid, *ratio_pows)
            }
            ScanTarget::LadderConvergence {
                x,
                alpha,
                beta,
                depth,
            } => commands::cmd_scan_ladder(*x, *alpha, *beta, *depth),
        },
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit as u8)
        }
    }
}
