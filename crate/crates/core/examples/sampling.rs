//! Random matrix ensembles drawn from named, reproducible streams.

use pbits::qlinalg::{herm_eigvals, unitarity_defect, von_neumann_entropy};
use pbits::randmat::{
    ginibre, haar_unitary, random_density, random_pure_state, random_separable_default, wishart, GinibreSpec,
    RandomStream,
};

fn main() -> pbits::Result<()> {
    let seed = 7;
    let s = |label: &str, k: u64| RandomStream::new(seed, label, k);

    let g = ginibre(GinibreSpec::complex(3, 5), &s("ginibre", 0))?;
    println!("complex Ginibre 3x5, Frobenius norm {:.4}", g.norm_l2());

    let w = wishart(4, 8, 2, &s("wishart", 0))?;
    println!("Wishart 4x4 (K=8) spectrum {:.3?}", herm_eigvals(&w)?);

    let u = haar_unitary(16, &s("haar", 0))?;
    println!("Haar unitary of order 16, ‖U†U − I‖ = {:.2e}", unitarity_defect(&u));

    let psi = random_pure_state(8, &s("pure", 0))?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    println!("random pure state in C^8, norm² = {norm:.15}");

    let rho = random_density(64, 1, &s("hs", 0))?;
    println!(
        "Hilbert-Schmidt state d=64: S = {:.4} bits (asymptotic {:.4})",
        von_neumann_entropy(&rho)?,
        6.0 - 1.0 / (2.0 * std::f64::consts::LN_2)
    );

    let sep = random_separable_default(3, 3, &s("sep", 0))?;
    println!("random separable state on 3x3, min eigenvalue {:.2e}", herm_eigvals(sep.matrix())?[0]);

    let again = random_density(64, 1, &s("hs", 0))?;
    println!("same stream, same state: {}", again.matrix() == rho.matrix());
    Ok(())
}
