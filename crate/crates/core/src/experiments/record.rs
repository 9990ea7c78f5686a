use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const CSV_HEADER: &str = "experiment,dim,sample,quantity,value";
const TIMESTAMP_PREFIX: &str = "# generated_unix: ";

/// One measured quantity of one Monte Carlo sample. `+∞` is written as an
/// empty value cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub dim: usize,
    pub sample: usize,
    pub quantity: String,
    pub value: f64,
}

fn check_field(name: &str, s: &str) -> Result<()> {
    if s.is_empty() || s.contains([',', '\n', '\r', '"']) {
        return Err(Error::invalid(format!("{name} {s:?} is empty or contains CSV metacharacters")));
    }
    Ok(())
}

impl ExperimentRecord {
    pub fn new(experiment: &str, dim: usize, sample: usize, quantity: impl Into<String>, value: f64) -> Self {
        Self { experiment: experiment.to_string(), dim, sample, quantity: quantity.into(), value }
    }

    pub fn validate(&self) -> Result<()> {
        check_field("experiment", &self.experiment)?;
        check_field("quantity", &self.quantity)?;
        if self.dim == 0 {
            return Err(Error::invalid("dim must be positive"));
        }
        if !(self.value.is_finite() || self.value == f64::INFINITY) {
            return Err(Error::invalid(format!("value {} of {} is not representable", self.value, self.quantity)));
        }
        Ok(())
    }

    /// Values use 17 significant digits so they round-trip exactly.
    pub fn to_csv_row(&self) -> String {
        let value = if self.value.is_finite() { format!("{:.16e}", self.value) } else { String::new() };
        format!("{},{},{},{},{}", self.experiment, self.dim, self.sample, self.quantity, value)
    }

    pub fn parse_csv_row(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::invalid(format!("expected 5 fields, got {}: {line:?}", fields.len())));
        }
        let int = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| Error::invalid(format!("bad {what} {s:?}")))
        };
        let value = if fields[4].is_empty() {
            f64::INFINITY
        } else {
            fields[4].parse::<f64>().map_err(|_| Error::invalid(format!("bad value {:?}", fields[4])))?
        };
        let rec = Self {
            experiment: fields[0].to_string(),
            dim: int(fields[1], "dim")?,
            sample: int(fields[2], "sample")?,
            quantity: fields[3].to_string(),
            value,
        };
        rec.validate()?;
        Ok(rec)
    }
}

/// Writes the header (after an optional timestamp comment) and all rows.
pub fn write_csv<W: Write>(mut w: W, records: &[ExperimentRecord], timestamp: bool) -> Result<()> {
    if timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "{TIMESTAMP_PREFIX}{now}")?;
    }
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        r.validate()?;
        writeln!(w, "{}", r.to_csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Parses CSV written by [`write_csv`], skipping a leading timestamp line.
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<ExperimentRecord>> {
    let mut lines = r.lines();
    let mut header = lines.next().transpose()?;
    if header.as_deref().is_some_and(|h| h.starts_with(TIMESTAMP_PREFIX)) {
        header = lines.next().transpose()?;
    }
    if header.as_deref() != Some(CSV_HEADER) {
        return Err(Error::invalid(format!("missing CSV header, found {header:?}")));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if !line.is_empty() {
            out.push(ExperimentRecord::parse_csv_row(&line)?);
        }
    }
    Ok(out)
}

/// Sample statistics of one quantity at one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: String,
    pub dim: usize,
    pub quantity: String,
    #[serde(with = "crate::entropics::extended")]
    pub mean: f64,
    #[serde(with = "crate::entropics::extended")]
    pub stddev: f64,
    #[serde(with = "crate::entropics::extended")]
    pub stderr: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
}

impl Summary {
    pub fn of(experiment: &str, dim: usize, quantity: &str, values: &[f64], seed: u64) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let stderr = if n > 0 { stddev / (n as f64).sqrt() } else { 0.0 };
        let fix = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
        Self {
            experiment: experiment.to_string(),
            dim,
            quantity: quantity.to_string(),
            mean,
            stddev: fix(stddev),
            stderr: fix(stderr),
            n,
            seed,
        }
    }
}

/// Groups records by `(dim, quantity)` in order of first appearance.
pub fn summarize(records: &[ExperimentRecord], seed: u64) -> Vec<Summary> {
    let mut keys: Vec<(usize, &str)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.dim, r.quantity.as_str())) {
            keys.push((r.dim, r.quantity.as_str()));
        }
    }
    keys.into_iter()
        .map(|(dim, q)| {
            let values: Vec<f64> = records
                .iter()
                .filter(|r| r.dim == dim && r.quantity == q)
                .map(|r| r.value)
                .collect();
            let experiment = &records.iter().find(|r| r.dim == dim && r.quantity == q).unwrap().experiment;
            Summary::of(experiment, dim, q, &values, seed)
        })
        .collect()
}
