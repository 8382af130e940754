use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pilotwave_cli::commands::{self, echo_config};
use pilotwave_cli::{CliError, CliResult, ExperimentConfig, RunContext};

#[derive(Parser)]
#[command(
    name = "pilotwave",
    version,
    about = "Pilot-wave trajectory and relaxation experiments"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for lattice sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Apply the `[long_run]` replacements.
    #[arg(long, global = true)]
    long_run: bool,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Solve every bound state of the configured cavity.
    Eigenvalues,
    /// Integrate trajectories from the configured start points.
    Trajectory,
    /// Run the relaxation experiment.
    Relax,
    /// Track one small cell over time.
    Subcompton,
    /// Run the invariant checks.
    Verify,
}

fn load(args: &Args) -> CliResult<Option<ExperimentConfig>> {
    let Some(path) = &args.config else {
        return Ok(None);
    };
    let cfg = ExperimentConfig::load(path)?;
    Ok(Some(if args.long_run { cfg.with_long_run() } else { cfg }))
}

fn context(args: &Args, cfg: Option<&ExperimentConfig>) -> CliResult<Option<RunContext>> {
    let out = args
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output.directory.clone()));
    Ok(out.map(|out| RunContext {
        out,
        quiet: args.quiet,
        long_run: args.long_run,
    }))
}

fn run(args: &Args) -> CliResult<()> {
    let cfg = load(args)?;
    let ctx = context(args, cfg.as_ref())?;
    if args.command == Command::Verify {
        if let (Some(c), Some(x)) = (&cfg, &ctx) {
            echo_config(c, x)?;
        }
        let report = commands::cmd_verify(cfg.as_ref(), ctx.as_ref())?;
        if !args.quiet {
            for line in report.lines() {
                println!("{line}");
            }
        }
        return report.into_result().map(|_| ());
    }
    let cfg = cfg.ok_or_else(|| CliError::Config("--config is required".into()))?;
    let ctx = ctx.ok_or_else(|| CliError::Config("no output directory: pass --out or set output.directory".into()))?;
    echo_config(&cfg, &ctx)?;
    match args.command {
        Command::Eigenvalues => commands::cmd_eigenvalues(&cfg, &ctx).map(|_| ()),
        Command::Trajectory => commands::cmd_trajectory(&cfg, &ctx).map(|_| ()),
        Command::Relax => commands::cmd_relax(&cfg, &ctx).map(|_| ()),
        Command::Subcompton => commands::cmd_subcompton(&cfg, &ctx).map(|_| ()),
        Command::Verify => unreachable!(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&args)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
