//! Mutual information of random pbits approaching `2 + 1/(2 ln 2)`.

use pbits::experiments::{run, Experiment, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::MutualInfo);
    cfg.dims = vec![8, 16, 32];
    cfg.samples = Some(5);
    cfg.seed = 7;
    let out = run(&cfg)?;
    for s in &out.summaries {
        println!("d={:<4} {:<32} {:>12.6} ± {:.2e}", s.dim, s.quantity, s.mean, s.stderr);
    }
    println!("{}", serde_json::to_string_pretty(&out.extra)?);
    Ok(())
}
