use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use blues_core::experiment::{
    cmd_approx, cmd_errors, cmd_params, params_file_name, parse_key_values, ExperimentConfig,
};
use blues_core::model::ProblemConfig;
use blues_core::optimize::ErrorFunctionalConfig;
use blues_core::verify::{run_checks, summary, VerifyConfig, VerifyHooks};

#[derive(Parser)]
#[command(name = "blues", version, about = "Exact iteration experiments for u_t - u_xx + u u_x + u(u+a) = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize (or echo fixed) control parameters and report the error functional.
    Params(Common),
    /// Print the closed form of every iterate.
    Approx(Common),
    /// Write log10 error curves as CSV.
    Errors(Common),
    /// Run the self-check suite.
    Verify(VerifyArgs),
}

/// Flags override values read from `--config`.
#[derive(Args, Default)]
struct Common {
    /// Reaction parameter (rational, e.g. 2 or 3/2).
    #[arg(long = "a")]
    a: Option<String>,
    /// Horizon of the error functional.
    #[arg(long = "T")]
    horizon: Option<String>,
    /// Number of iteration steps.
    #[arg(long = "n")]
    steps: Option<String>,
    /// vim or blues.
    #[arg(long)]
    method: Option<String>,
    /// picard, mann, krasnoselskii, ishikawa, hybrid-pk or all.
    #[arg(long)]
    procedure: Option<String>,
    /// Spatial point of the error curves.
    #[arg(long = "x")]
    x: Option<String>,
    /// Time grid as start:stop:count.
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Significant digits of printed numbers.
    #[arg(long)]
    precision: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter JSON to use instead of optimizing.
    #[arg(long = "fixed-params")]
    fixed_params: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut settings = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_key_values(&text)?
            }
            None => BTreeMap::new(),
        };
        let path_str = |p: &PathBuf| p.to_string_lossy().into_owned();
        let flags = [
            ("a", self.a.clone()),
            ("T", self.horizon.clone()),
            ("n", self.steps.clone()),
            ("method", self.method.clone()),
            ("procedure", self.procedure.clone()),
            ("x", self.x.clone()),
            ("t-grid", self.t_grid.clone()),
            ("precision", self.precision.clone()),
            ("out", self.out.as_ref().map(path_str)),
            ("fixed-params", self.fixed_params.as_ref().map(path_str)),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                settings.insert(key.to_string(), v);
            }
        }
        Ok(ExperimentConfig::default().apply(&settings)?)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Seed of the randomized checks.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Random samples per check.
    #[arg(long, default_value_t = 24)]
    samples: usize,
}

fn params(cfg: &ExperimentConfig) -> Result<bool> {
    let report = cmd_params(cfg)?;
    let json = report.to_json()?;
    print!("{}", report.table());
    match &cfg.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(params_file_name(&report));
            fs::write(&path, json)?;
            println!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(true)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let exp = args.common.resolve()?;
    let cfg = VerifyConfig {
        problem: ProblemConfig::new(exp.a.clone()),
        functional: ErrorFunctionalConfig::new(exp.horizon.clone())?,
        seed: args.seed,
        samples: args.samples,
        steps: exp.steps.max(1),
        ..Default::default()
    };
    let report = run_checks(&cfg, &VerifyHooks::default());
    print!("{}", summary(&report));
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Params(c) => c.resolve().and_then(|cfg| params(&cfg)),
        Command::Approx(c) => c.resolve().and_then(|cfg| {
            print!("{}", cmd_approx(&cfg)?);
            Ok(true)
        }),
        Command::Errors(c) => c.resolve().and_then(|cfg| {
            for path in cmd_errors(&cfg)? {
                println!("wrote {}", path.display());
            }
            Ok(true)
        }),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
