//! Building pbits from generators, checking the spectrum identity, and
//! undoing the twisting with privacy squeezing.

use pbits::qlinalg::{fidelity_with_max_entangled, herm_eigvals};
use pbits::randmat::{haar_unitary, random_density, RandomStream};
use pbits::states::{bell_block_decompose, pbit_from_x, privacy_squeeze, random_pbit, PrivateState};

fn main() -> pbits::Result<()> {
    // shield A'B' of dims [2, 2]
    let d_s = 2;
    let u = haar_unitary(d_s * d_s, &RandomStream::new(1, "u", 0))?;
    let sigma = random_density(d_s * d_s, 1, &RandomStream::new(1, "sigma", 0))?.with_dims(vec![d_s, d_s])?;
    let gamma = PrivateState::new(u, sigma)?;
    println!("pbit on dims {:?}", gamma.state().dims());

    let spec = herm_eigvals(gamma.state().matrix())?;
    let nonzero: Vec<f64> = spec.iter().copied().filter(|x| *x > 1e-9).collect();
    println!("nonzero spectrum of γ: {nonzero:.5?}");
    println!("spectrum of σ:         {:.5?}", gamma.sigma_spectrum()?);

    let squeezed = privacy_squeeze(gamma.state(), &gamma.twisting())?;
    println!(
        "squeezed key part fidelity with Φ+: {:.12}",
        fidelity_with_max_entangled(&squeezed, 2)?
    );

    let blocks = bell_block_decompose(&gamma.key_attacked(), 2)?;
    println!("key-attacked state is key-correlated: {}", blocks.is_key_correlated());

    let rebuilt = pbit_from_x(&gamma.x())?;
    let diff = rebuilt.state().matrix() - gamma.state().matrix();
    println!("pbit rebuilt from X = σU† differs by {:.2e}", diff.norm_l2());

    let big = random_pbit(32, &RandomStream::new(1, "pbit", 0))?;
    println!("random pbit d_s=32: I(AA':BB') = {:.4}", big.mutual_information()?);

    Ok(())
}
