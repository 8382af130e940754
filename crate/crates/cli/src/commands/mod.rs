mod eigenvalues;
mod relax;
mod subcompton;
mod trajectory;
mod verify;

pub use eigenvalues::{cmd_eigenvalues, EigenvalueRow};
pub use relax::{cmd_relax, RelaxOutcome, GOOD_FRACTION_FLOOR};
pub use subcompton::{cmd_subcompton, SubComptonOutcome};
pub use trajectory::{cmd_trajectory, TrajectorySummary};
pub use verify::{cmd_verify, Check, VerifyReport};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::RunContext;

/// Write the echo of the configuration actually used.
pub fn echo_config(cfg: &ExperimentConfig, ctx: &RunContext) -> CliResult<()> {
    ctx.write_text("config-echo.toml", &cfg.to_toml())?;
    Ok(())
}
