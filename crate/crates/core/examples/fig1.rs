//! Minimal eigenvalue of `2^λ σ − ρ` over random separable `σ`.
//!
//! `cargo run --release --example fig1 -- 32 100` runs the full-size figure.

use pbits::experiments::{run, Experiment, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut cfg = ExperimentConfig::new(Experiment::Fig1);
    cfg.dims = vec![args.first().copied().unwrap_or(8)];
    cfg.samples = Some(args.get(1).copied().unwrap_or(20));
    cfg.seed = 7;
    let out = run(&cfg)?;
    let d = cfg.dims[0];
    println!("lambda  mean_min_eig  max_min_eig");
    for s in out.summaries.iter().filter(|s| s.dim == d) {
        let max = out.values(d, &s.quantity).into_iter().fold(f64::NEG_INFINITY, f64::max);
        println!("{:>6}  {:>12.3e}  {:>11.3e}", s.quantity.trim_start_matches("min_eig_lambda="), s.mean, max);
    }
    println!("{}", serde_json::to_string_pretty(&out.extra)?);
    Ok(())
}
