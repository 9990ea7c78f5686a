//! Largest eigenvalue of Hilbert-Schmidt states of order `d²` against `4/d²`.

use pbits::experiments::{run, Experiment, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::LambdaMax);
    cfg.dims = vec![16];
    cfg.samples = Some(50);
    cfg.seed = 7;
    let out = run(&cfg)?;
    for s in &out.summaries {
        println!("d={:<4} {:<32} {:>12.6} ± {:.2e}", s.dim, s.quantity, s.mean, s.stderr);
    }
    println!("{}", serde_json::to_string_pretty(&out.extra)?);
    Ok(())
}
