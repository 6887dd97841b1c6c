use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use spectra_cli::{
    cmd_bands, cmd_stats, cmd_trace, cmd_verify, ConfigError, ConfigFile, Format,
    InsufficientRange, Outcome, RunConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Band spectra of periodic sphere-and-segment systems.
#[derive(Parser, Debug)]
#[command(name = "spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dispersion quantity on the scan grid.
    Trace(RunArgs),
    /// Bands and gaps with energy endpoints and pole annotations.
    Bands(RunArgs),
    /// Band-to-gap statistics and the ratio envelope fit.
    Stats(RunArgs),
    /// Check that high bands lie inside the localization intervals.
    Verify(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model name (loose-straight, ..., tight-carpet) or numeral I-VI.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "kmin")]
    k_min: Option<f64>,
    #[arg(long = "kmax")]
    k_max: Option<f64>,
    /// Samples per pole-free subinterval.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long = "eps")]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit the ratio envelope in both regimes (stats).
    #[arg(long)]
    both_regimes: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            model: self.model.clone(),
            a: self.a,
            d: self.d,
            alpha: self.alpha,
            k_min: self.k_min,
            k_max: self.k_max,
            resolution: self.resolution,
            epsilon: self.epsilon,
            out: self.out.clone(),
            format: self.format,
            both_regimes: self.both_regimes.then_some(true),
        };
        RunConfig::resolve(base.overridden_by(flags))
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let (args, f): (&RunArgs, fn(&RunConfig) -> Result<Outcome>) = match &cli.command {
        Command::Trace(a) => (a, cmd_trace),
        Command::Bands(a) => (a, cmd_bands),
        Command::Stats(a) => (a, cmd_stats),
        Command::Verify(a) => (a, cmd_verify),
    };
    let cfg = args.resolve()?;
    f(&cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InsufficientRange>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
