//! Spectrum identity residual: nonzero eigenvalues of a pbit equal those of `σ`.

use pbits::experiments::{run, Experiment, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::PbitSpectrum);
    cfg.dims = vec![4, 8, 16];
    cfg.samples = Some(1);
    cfg.seed = 7;
    let out = run(&cfg)?;
    for s in &out.summaries {
        println!("d={:<4} {:<32} {:>12.6} ± {:.2e}", s.dim, s.quantity, s.mean, s.stderr);
    }
    println!("{}", serde_json::to_string_pretty(&out.extra)?);
    Ok(())
}
