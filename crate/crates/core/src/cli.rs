//! Command-line front end. Exit status 0 means the checked claim holds, 1 that
//! it does not, 2 that the run itself failed.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::code5::LogicalAmplitudes;
use crate::error::{Error, Result};
use crate::network::{ColumnOrder, Layout, Schedule, WiringTable};
use crate::protocol::Protocol;
use crate::report::{Format, Render};
use crate::verify::{
    ancilla_leak_test, demo_naive_failure, monte_carlo_unitary_sweep, reproduce_table1, run_cases, sweep_cases,
    SweepConfig, SweepInput, Tolerances, DISTRIBUTION_TOL, FIDELITY_TOL,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CRITERION: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ftqec", version, about = "Fault injection for five-qubit-code syndrome extraction")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format: json, csv or human.
    #[arg(long, global = true, default_value = "human")]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Base seed; per-case seeds are derived from it and the case id.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, env = "FTQEC_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Fidelity tolerance for weight classification.
    #[arg(long, global = true, default_value_t = FIDELITY_TOL)]
    pub fidelity_tol: f64,

    /// Element-wise tolerance for outcome distributions.
    #[arg(long, global = true, default_value_t = DISTRIBUTION_TOL)]
    pub distribution_tol: f64,

    /// Order of the CNOTs that share a control: descending or ascending register.
    #[arg(long, global = true, default_value = "descending")]
    pub column_order: ColumnOrder,

    /// Gate layout: commuting (default) or two-block.
    #[arg(long, global = true, default_value = "commuting")]
    pub layout: Layout,

    /// Replace check controls, e.g. `1:0=1,4;2:3=0,4` (block:register=controls).
    #[arg(long, global = true)]
    pub wiring_override: Option<WiringTable>,

    /// Load the schedule from an exported CSV file instead of building it.
    #[arg(long, global = true)]
    pub schedule_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate every tabulated single-qubit error and compare syndromes.
    Table1,
    /// The X⊗X fault on the d0→a3 CNOT under both protocols.
    Demo,
    /// Exhaustive sweep over Pauli fault cases or single-error inputs.
    Sweep {
        #[arg(long, default_value = "conditional")]
        protocol: Protocol,
        /// clean or single-errors.
        #[arg(long, default_value = "clean")]
        input: SweepInput,
        /// Logical input: zero, one, plus or two real coefficients `a,b`.
        #[arg(long, default_value = "zero")]
        logical: LogicalAmplitudes,
        /// Only run cases whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Random two-qubit unitary faults on CNOT locations.
    Sample {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value = "conditional")]
        protocol: Protocol,
        #[arg(long, default_value = "zero")]
        logical: LogicalAmplitudes,
    },
    /// Even-parity against all-zeros syndrome registers.
    Leak,
    /// Print or export the gate list.
    Schedule {
        /// Also write the schedule CSV to this file.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Validate and print a schedule CSV file.
        #[arg(long)]
        import: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Output(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Output(format!("{}: {e}", path.display())))
}

impl GlobalArgs {
    fn schedule(&self) -> Result<Schedule> {
        if let Some(path) = &self.schedule_file {
            return Schedule::import(&read(path)?);
        }
        let wiring = self.wiring_override.unwrap_or_default();
        Schedule::build_with(&wiring, self.column_order, self.layout)
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { fidelity: self.fidelity_tol, distribution: self.distribution_tol }
    }

    fn emit(&self, report: &impl Render) -> Result<()> {
        let text = report.render(self.format)?;
        match &self.output {
            Some(path) => write(path, &text),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Output(e.to_string())),
        }
    }
}

/// Runs one command and returns whether its claim held.
pub fn execute(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    if g.threads > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(g.threads).build_global();
    }
    let schedule = g.schedule()?;
    let config = |protocol, input, logical| SweepConfig {
        protocol,
        input,
        logical,
        seed: g.seed,
        tolerances: g.tolerances(),
    };
    match &cli.command {
        Command::Table1 => {
            let r = reproduce_table1(&schedule, g.seed)?;
            g.emit(&r)?;
            Ok(r.reproduced)
        }
        Command::Demo => {
            let r = demo_naive_failure(&schedule, g.seed, g.fidelity_tol)?;
            g.emit(&r)?;
            Ok(r.reproduced)
        }
        Command::Sweep { protocol, input, logical, filter } => {
            if *input == SweepInput::RandomUnitary {
                return Err(Error::Parse("use the sample command for random unitary faults".into()));
            }
            let mut cases = sweep_cases(&schedule, *input);
            if let Some(prefix) = filter {
                cases.retain(|c| c.case_id.starts_with(prefix.as_str()));
                if cases.is_empty() {
                    return Err(Error::Parse(format!("no case id starts with {prefix:?}")));
                }
            }
            let r = run_cases(&schedule, &cases, &config(*protocol, *input, *logical))?;
            g.emit(&r)?;
            Ok(r.all_passed())
        }
        Command::Sample { trials, protocol, logical } => {
            let c = config(*protocol, SweepInput::RandomUnitary, *logical);
            let r = monte_carlo_unitary_sweep(&schedule, *trials, &c)?;
            g.emit(&r)?;
            Ok(r.all_passed())
        }
        Command::Leak => {
            let r = ancilla_leak_test(&schedule, &g.tolerances())?;
            g.emit(&r)?;
            Ok(r.reproduced)
        }
        Command::Schedule { export, import } => {
            let s = match import {
                Some(path) => Schedule::import(&read(path)?)?,
                None => schedule,
            };
            if let Some(path) = export {
                write(path, &s.export())?;
            }
            g.emit(&s)?;
            Ok(true)
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_CRITERION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
