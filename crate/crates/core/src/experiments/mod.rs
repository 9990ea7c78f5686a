//! Seeded Monte Carlo experiments.
//!
//! Each experiment is a pure function of its configuration: sample `k` at
//! dimension `d` draws from the stream `(seed, "<experiment>/<role>/<d>", k)`,
//! samples may run on a thread pool, and results are merged in index order.
//! Output is a list of [`ExperimentRecord`]s plus per-quantity [`Summary`]s
//! and experiment-specific extras.

mod commands;
mod record;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropics::AlphaGrid;
use crate::{Error, Result};

pub use commands::{
    cmd_bound_report, cmd_entropy_asymptotics, cmd_fig1, cmd_lambda_max, cmd_mutual_info,
    cmd_pbit_spectrum, cmd_pt_concentration, cmd_rate_regions, default_lambda_grid,
};
pub use record::{read_csv, summarize, write_csv, ExperimentRecord, Summary, CSV_HEADER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    Fig1,
    EntropyAsymptotics,
    MutualInfo,
    PtConcentration,
    RateRegions,
    BoundReport,
    PbitSpectrum,
    LambdaMax,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig1,
        Experiment::EntropyAsymptotics,
        Experiment::MutualInfo,
        Experiment::PtConcentration,
        Experiment::RateRegions,
        Experiment::BoundReport,
        Experiment::PbitSpectrum,
        Experiment::LambdaMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::EntropyAsymptotics => "entropy-asymptotics",
            Experiment::MutualInfo => "mutual-info",
            Experiment::PtConcentration => "pt-concentration",
            Experiment::RateRegions => "rate-regions",
            Experiment::BoundReport => "bound-report",
            Experiment::PbitSpectrum => "pbit-spectrum",
            Experiment::LambdaMax => "lambda-max",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| Error::invalid(format!("unknown experiment {name:?}")))
    }

    /// Desk-scale defaults: `(dims, samples)`.
    pub fn defaults(self) -> (Vec<usize>, usize) {
        match self {
            Experiment::Fig1 => (vec![8, 16, 32], 100),
            Experiment::EntropyAsymptotics => (vec![16, 64, 256], 50),
            Experiment::MutualInfo => (vec![64], 20),
            Experiment::PtConcentration => (vec![8, 16, 32, 64], 20),
            Experiment::RateRegions => (vec![64], 20),
            Experiment::BoundReport => (vec![16], 5),
            Experiment::PbitSpectrum => (vec![16], 1),
            Experiment::LambdaMax => (vec![32], 100),
        }
    }

    fn min_dim(self) -> usize {
        match self {
            Experiment::EntropyAsymptotics | Experiment::LambdaMax => 1,
            _ => 2,
        }
    }
}

/// Full description of a run. Unset optional fields take the experiment's
/// defaults; the resolved config determines the CSV output bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub dims: Vec<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub lambda_grid: Option<Vec<f64>>,
    pub alpha_grid: Option<AlphaGrid>,
    pub epsilon: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub json_summary: Option<PathBuf>,
    pub no_timestamp: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: String::new(),
            dims: Vec::new(),
            samples: None,
            seed: 0,
            lambda_grid: None,
            alpha_grid: None,
            epsilon: None,
            output_path: None,
            json_summary: None,
            no_timestamp: false,
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 0.01;

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { experiment: experiment.name().to_string(), ..Self::default() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn kind(&self) -> Result<Experiment> {
        Experiment::from_name(&self.experiment)
    }

    /// Fills defaults and checks ranges.
    pub fn resolved(&self) -> Result<Self> {
        let kind = self.kind()?;
        let (dims, samples) = kind.defaults();
        let mut out = self.clone();
        if out.dims.is_empty() {
            out.dims = dims;
        }
        out.samples.get_or_insert(samples);
        if kind == Experiment::Fig1 {
            out.lambda_grid.get_or_insert_with(default_lambda_grid);
        }
        if kind == Experiment::BoundReport {
            out.alpha_grid.get_or_insert_with(AlphaGrid::default_grid);
            out.epsilon.get_or_insert(DEFAULT_EPSILON);
        }
        out.validate(kind)?;
        Ok(out)
    }

    fn validate(&self, kind: Experiment) -> Result<()> {
        if let Some(d) = self.dims.iter().find(|&&d| d < kind.min_dim()) {
            return Err(Error::invalid(format!("{} needs dimensions >= {}, got {d}", kind.name(), kind.min_dim())));
        }
        if self.samples == Some(0) {
            return Err(Error::invalid("samples must be positive"));
        }
        if let Some(grid) = &self.lambda_grid {
            if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("lambda grid must be a nonempty list of finite values"));
            }
        }
        if let Some(grid) = &self.alpha_grid {
            grid.validate()?;
        }
        if let Some(eps) = self.epsilon {
            if !(0.0..1.0).contains(&eps) {
                return Err(Error::domain(format!("epsilon must lie in [0, 1), got {eps}")));
            }
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(1)
    }
}

/// Records, summaries and experiment-specific extras of one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub summaries: Vec<Summary>,
    pub extra: serde_json::Value,
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
}

impl ExperimentOutput {
    pub(crate) fn new(
        experiment: Experiment,
        seed: u64,
        dims: &[usize],
        samples: usize,
        records: Vec<ExperimentRecord>,
        extra: serde_json::Value,
    ) -> Self {
        Self {
            experiment: experiment.name().to_string(),
            seed,
            dims: dims.to_vec(),
            samples,
            summaries: summarize(&records, seed),
            extra,
            records,
        }
    }

    /// Records of one quantity at one dimension, in sample order.
    pub fn values(&self, dim: usize, quantity: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.dim == dim && r.quantity == quantity)
            .map(|r| r.value)
            .collect()
    }

    pub fn summary(&self, dim: usize, quantity: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.dim == dim && s.quantity == quantity)
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv_to<W: Write>(&self, w: W, timestamp: bool) -> Result<()> {
        write_csv(w, &self.records, timestamp)
    }

    /// Writes the CSV to `out` (stdout when `None`) and the JSON summary to
    /// `json` when given.
    pub fn write_files(&self, out: Option<&Path>, json: Option<&Path>, timestamp: bool) -> Result<()> {
        match out {
            Some(p) => self.write_csv_to(BufWriter::new(File::create(p)?), timestamp)?,
            None => self.write_csv_to(std::io::stdout().lock(), timestamp)?,
        }
        if let Some(p) = json {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(self.summary_json()?.as_bytes())?;
            f.write_all(b"\n")?;
            f.flush()?;
        }
        Ok(())
    }
}

/// Keeps dense kernels single-threaded so that samples are the unit of
/// parallel work.
pub fn configure_parallelism() {
    faer::set_global_parallelism(faer::Par::Seq);
}

/// Evaluates `f` on sample indices `0..n` in parallel, returning results in
/// index order.
pub(crate) fn par_samples<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Runs the configured experiment without writing any files.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    configure_parallelism();
    let cfg = config.resolved()?;
    let n = cfg.samples();
    let dims = &cfg.dims;
    let seed = cfg.seed;
    match cfg.kind()? {
        Experiment::Fig1 => cmd_fig1(dims, cfg.lambda_grid.as_deref().unwrap_or(&[]), n, seed),
        Experiment::EntropyAsymptotics => cmd_entropy_asymptotics(dims, n, seed),
        Experiment::MutualInfo => cmd_mutual_info(dims, n, seed),
        Experiment::PtConcentration => cmd_pt_concentration(dims, n, seed),
        Experiment::RateRegions => cmd_rate_regions(dims, n, seed),
        Experiment::BoundReport => cmd_bound_report(
            dims,
            n,
            seed,
            cfg.alpha_grid.as_ref().expect("resolved"),
            cfg.epsilon.expect("resolved"),
        ),
        Experiment::PbitSpectrum => cmd_pbit_spectrum(dims, n, seed),
        Experiment::LambdaMax => cmd_lambda_max(dims, n, seed),
    }
}

/// [`run`] followed by writing the configured outputs.
pub fn run_and_write(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let output = run(config)?;
    output.write_files(
        config.output_path.as_deref(),
        config.json_summary.as_deref(),
        !config.no_timestamp,
    )?;
    Ok(output)
}
