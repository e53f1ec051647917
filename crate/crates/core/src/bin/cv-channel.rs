use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cv_channel::propagator::MemoryScheme;
use cv_channel::scenario::{preset, run_scenario, sweep, RunRecord, Scenario, PRESET_NAMES};
use cv_channel::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Entanglement dynamics of a two-mode squeezed state in a common bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run(ScenarioArgs),
    /// Run a scenario once per value of one parameter.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Parameter to vary (n, eta, omega_c, kappa, r, t_max, dt).
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Reproduce the dataset of one figure (fig1, fig2, fig3, fig4).
    Preset {
        name: String,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Memory {
    Direct,
    ExponentialSum,
}

#[derive(Args)]
struct ScenarioArgs {
    /// JSON scenario file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long = "omega-c", allow_negative_numbers = true)]
    omega_c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, value_enum)]
    memory: Option<Memory>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<Scenario> {
        let mut sc = match &self.config {
            Some(path) => Scenario::from_json_file(path)?,
            None => Scenario::figure_defaults(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { sc.$f = v; })* };
        }
        take!(n, eta, omega_c, kappa, r, t_max, dt, stride);
        if let Some(out) = &self.out {
            sc.out = out.clone();
        }
        if let Some(m) = self.memory {
            sc.memory = match m {
                Memory::Direct => MemoryScheme::Direct,
                Memory::ExponentialSum => MemoryScheme::ExponentialSum,
            };
        }
        sc.validate()?;
        Ok(sc)
    }
}

fn report(rec: &RunRecord) {
    let d = &rec.diagnostics;
    eprintln!(
        "{}: E_N(final) = {:.6}, dt-halving change ~ {:.2e}{}, {:.1} s",
        rec.scenario.out.display(),
        d.final_e_n,
        d.dt_convergence.estimated_halving_change,
        if d.dt_convergence.converged { "" } else { " (NOT converged)" },
        rec.wall_clock_seconds
    );
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => report(&run_scenario(&args.resolve()?)?),
        Command::Sweep { scenario, axis, values } => {
            for rec in sweep(&scenario.resolve()?, &axis, &values)? {
                report(&rec);
            }
        }
        Command::Preset { name, out } => {
            let p = preset(&name, &out).map_err(|e| match e {
                Error::Usage(_) => Error::Usage(format!(
                    "unknown preset `{name}`; available: {}",
                    PRESET_NAMES.join(", ")
                )),
                other => other,
            })?;
            eprintln!("{}: {}", p.name, p.description);
            for (_, sc) in &p.runs {
                report(&run_scenario(sc)?);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
