//! Relative entropy, sandwiched Rényi, max- and hypothesis-testing
//! divergences, and log-negativity.

use pbits::entropics::{dmax, hypothesis_testing, log_negativity, relative_entropy, sandwiched_renyi};
use pbits::qlinalg::{Bipartition, DensityMatrix};
use pbits::randmat::{random_density, RandomStream};

fn main() -> pbits::Result<()> {
    let rho = random_density(6, 1, &RandomStream::new(5, "rho", 0))?;
    let sigma = random_density(6, 2, &RandomStream::new(5, "sigma", 0))?;

    println!("D(ρ‖σ)        = {:.6}", relative_entropy(&rho, &sigma)?.value);
    for alpha in [1.001, 1.5, 2.0, 10.0, f64::INFINITY] {
        println!("D̃_{alpha:<6}     = {:.6}", sandwiched_renyi(&rho, &sigma, alpha)?.value);
    }
    println!("D_max(ρ‖σ)    = {:.6}", dmax(&rho, &sigma)?.value);
    for eps in [0.0, 0.01, 0.1] {
        println!("D_h^{eps:<4}(ρ‖σ) = {:.6}", hypothesis_testing(&rho, &sigma, eps)?.value);
    }

    let pure = DensityMatrix::basis(0, vec![6])?;
    let other = DensityMatrix::basis(1, vec![6])?;
    println!("orthogonal supports: D = {:?}", relative_entropy(&pure, &other)?.value);

    let cut = Bipartition::new(&[0], 2)?;
    println!("E_N(Φ+ on 4x4)  = {:.6}", log_negativity(&DensityMatrix::max_entangled(4), &cut)?);
    println!("E_N(I/16)       = {:.6}", log_negativity(&DensityMatrix::maximally_mixed(vec![4, 4]), &cut)?);
    Ok(())
}
