//! Mean entropy of Hilbert-Schmidt states against `log₂ d − 1/(2 ln 2)`.

use pbits::experiments::{run, Experiment, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::EntropyAsymptotics);
    cfg.dims = vec![16, 64, 256];
    cfg.samples = Some(50);
    cfg.seed = 7;
    let out = run(&cfg)?;
    for s in &out.summaries {
        println!("d={:<4} {:<32} {:>12.6} ± {:.2e}", s.dim, s.quantity, s.mean, s.stderr);
    }
    println!("{}", serde_json::to_string_pretty(&out.extra)?);
    Ok(())
}
