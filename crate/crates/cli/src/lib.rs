//! Command-line front end for `fidelity_lab`: file-driven reports and the
//! verification harness.

pub mod commands;
pub mod error;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fidelity_lab::ChannelClass;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::verify::{run_suite, Suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(
    name = "fidelity-lab",
    version,
    about = "Quantum fidelity calculator and verifier"
)]
pub struct Cli {
    /// Output format; JSON is canonical, text is a flattened rendering.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    All,
    Unital,
    MixedUnitary,
}

impl From<ClassArg> for ChannelClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::All => ChannelClass::All,
            ClassArg::Unital => ChannelClass::Unital,
            ClassArg::MixedUnitary => ChannelClass::MixedUnitary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Orbits,
    Channels,
    Angles,
    Means,
    Rearrangement,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Orbits => vec![Suite::Orbits],
            SuiteArg::Channels => vec![Suite::Channels],
            SuiteArg::Angles => vec![Suite::Angles],
            SuiteArg::Means => vec![Suite::Means],
            SuiteArg::Rearrangement => vec![Suite::Rearrangement],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fidelity and Bures angle between two states.
    Fidelity { rho: PathBuf, sigma: PathBuf },
    /// Minimum and maximum fidelity over the unitary orbit of sigma.
    OrbitBounds { rho: PathBuf, sigma: PathBuf },
    /// Minimum of F(rho, Phi(sigma)) over a channel class, with a witness channel.
    ChannelMin {
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
    },
    /// Canonical angles and projection fidelity between two subspaces.
    Angles { s: PathBuf, t: PathBuf },
    /// Monte-Carlo check of the closed-form results.
    Verify {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

/// Builds the normalized report and whether every verification check held.
pub fn execute(command: &Command) -> Result<(Value, bool), CliError> {
    let (name, body, ok) = match command {
        Command::Fidelity { rho, sigma } => {
            ("fidelity", commands::fidelity_report(rho, sigma)?, true)
        }
        Command::OrbitBounds { rho, sigma } => (
            "orbit-bounds",
            commands::orbit_bounds_report(rho, sigma)?,
            true,
        ),
        Command::ChannelMin { rho, sigma, class } => (
            "channel-min",
            commands::channel_min_report(rho, sigma, (*class).into())?,
            true,
        ),
        Command::Angles { s, t } => ("angles", commands::angles_report(s, t)?, true),
        Command::Verify {
            dim,
            trials,
            seed,
            suite,
            tol,
        } => {
            let cfg = VerifyConfig {
                dim: *dim,
                trials: *trials,
                seed: *seed,
                tol: *tol,
            };
            cfg.validate()?;
            let mut reports = Vec::new();
            let mut timing = Map::new();
            for s in suite.suites() {
                let r = run_suite(s, &cfg)?;
                timing.insert(s.name().into(), json!(r.wall_time_s));
                reports.push(r);
            }
            let violations: u64 = reports.iter().map(|r| r.violations).sum();
            let body = json!({
                "params": { "dim": cfg.dim, "trials": cfg.trials, "seed": cfg.seed, "tol": cfg.tol },
                "suites": reports,
                "violations": violations,
                "timing_s": timing,
            });
            ("verify", body, violations == 0)
        }
    };
    Ok((report::normalize(report::envelope(name, body))?, ok))
}

fn emit(out: &mut dyn Write, value: &Value, format: Format) -> Result<(), CliError> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report::render_text(value),
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        path: None,
        message: e.to_string(),
    })
}

/// Parses `args`, runs the command, writes the report, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|(value, ok)| {
        emit(out, &value, cli.format)?;
        if ok {
            Ok(())
        } else {
            Err(CliError::Invariant(format!(
                "{} violation(s); see first_violation in the report",
                value["violations"]
            )))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
