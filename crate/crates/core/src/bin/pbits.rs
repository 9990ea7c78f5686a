use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pbits::entropics::AlphaGrid;
use pbits::experiments::{run_and_write, Experiment, ExperimentConfig};
use pbits::Error;

#[derive(Parser)]
#[command(name = "pbits", version, about = "Seeded Monte Carlo experiments on random private states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal eigenvalue of 2^λσ − ρ over random separable σ.
    Fig1(Flags),
    /// Entropy of Hilbert-Schmidt states against log₂d − 1/(2 ln 2).
    EntropyAsymptotics(Flags),
    /// Mutual information I(AA':BB') of random pbits.
    MutualInfo(Flags),
    /// Concentration of the reduced state of random ibits.
    PtConcentration(Flags),
    /// Rate regions of random ibits in all four scenarios.
    RateRegions(Flags),
    /// Relaxed repeater and key bounds for random pbit pairs.
    BoundReport(Flags),
    /// Spectrum identity residual of random pbits.
    PbitSpectrum(Flags),
    /// Largest eigenvalue of Hilbert-Schmidt states of order d².
    LambdaMax(Flags),
}

#[derive(Args)]
struct Flags {
    /// Single dimension (shorthand for a one-element --dims).
    #[arg(long, conflicts_with = "dims")]
    dim: Option<usize>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated λ values (fig1).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda_grid: Option<Vec<f64>>,
    /// Comma-separated Rényi orders, `inf` allowed (bound-report).
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Type-I error for the hypothesis-testing divergence (bound-report).
    #[arg(long)]
    epsilon: Option<f64>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json_summary: Option<PathBuf>,
    #[arg(long)]
    no_timestamp: bool,
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (Experiment, Flags) {
        match self {
            Command::Fig1(f) => (Experiment::Fig1, f),
            Command::EntropyAsymptotics(f) => (Experiment::EntropyAsymptotics, f),
            Command::MutualInfo(f) => (Experiment::MutualInfo, f),
            Command::PtConcentration(f) => (Experiment::PtConcentration, f),
            Command::RateRegions(f) => (Experiment::RateRegions, f),
            Command::BoundReport(f) => (Experiment::BoundReport, f),
            Command::PbitSpectrum(f) => (Experiment::PbitSpectrum, f),
            Command::LambdaMax(f) => (Experiment::LambdaMax, f),
        }
    }
}

fn config(kind: Experiment, flags: Flags) -> pbits::Result<ExperimentConfig> {
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::new(kind),
    };
    if cfg.experiment.is_empty() {
        cfg.experiment = kind.name().to_string();
    }
    if cfg.kind()? != kind {
        return Err(Error::Validation(format!(
            "config is for {:?} but the subcommand is {}",
            cfg.experiment,
            kind.name()
        )));
    }
    if let Some(d) = flags.dim {
        cfg.dims = vec![d];
    }
    if let Some(d) = flags.dims {
        cfg.dims = d;
    }
    if flags.samples.is_some() {
        cfg.samples = flags.samples;
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if flags.lambda_grid.is_some() {
        cfg.lambda_grid = flags.lambda_grid;
    }
    if let Some(g) = flags.alpha_grid {
        cfg.alpha_grid = Some(AlphaGrid::parse(&g)?);
    }
    if flags.epsilon.is_some() {
        cfg.epsilon = flags.epsilon;
    }
    if flags.out.is_some() {
        cfg.output_path = flags.out;
    }
    if flags.json_summary.is_some() {
        cfg.json_summary = flags.json_summary;
    }
    cfg.no_timestamp |= flags.no_timestamp;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (kind, flags) = cli.command.split();
    let result = config(kind, flags).and_then(|cfg| run_and_write(&cfg));
    match result {
        Ok(output) => {
            for s in &output.summaries {
                eprintln!("{} d={} {}: mean {:.6} ± {:.2e} (N={})", s.experiment, s.dim, s.quantity, s.mean, s.stderr, s.n);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
