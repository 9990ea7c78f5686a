//! Relaxed repeater and key bounds for a pair of random pbits.

use pbits::entropics::{key_bound_relaxed, mutual_info_key_bound, repeater_bound, AlphaGrid, EdProxy, SepProxy};
use pbits::qlinalg::{Bipartition, DensityMatrix};
use pbits::randmat::RandomStream;
use pbits::states::random_pbit;

fn main() -> pbits::Result<()> {
    let rho = random_pbit(4, &RandomStream::new(11, "rho", 0))?;
    let rho_prime = random_pbit(4, &RandomStream::new(11, "rho_prime", 0))?;
    let grid = AlphaGrid::parse("1.01,1.1,1.5,2,4,10,inf")?;
    // AA' | BB' on dims [2, 2, d_s, d_s]
    let cut = Bipartition::new(&[0, 2], 4)?;

    let report = repeater_bound(
        rho.state(),
        rho_prime.state(),
        &[0, 1],
        &SepProxy::maximally_mixed(),
        &EdProxy::LogNegativity(cut),
        &grid,
    )?;
    println!("{}", report.to_json()?);

    let mixed = DensityMatrix::maximally_mixed(rho.state().dims().to_vec());
    let key = key_bound_relaxed(rho.state(), &mixed, &SepProxy::maximally_mixed(), &grid)?;
    println!("key bound with σ_proxy = I/D: {:.4}", key.infimum);
    println!("I/2 bound:                    {:.4}", mutual_info_key_bound(&rho)?);
    Ok(())
}
