//! Saving and loading states and generators as JSON or binary.

use pbits::qlinalg::MatrixRecord;
use pbits::randmat::{random_density, RandomStream};
use pbits::states::{random_pbit, GeneratorRecord, PrivateState};

fn main() -> pbits::Result<()> {
    let rho = random_density(3, 1, &RandomStream::new(2, "rho", 0))?;
    let rec = MatrixRecord::from(&rho);
    let json = rec.to_json()?;
    println!("{json}");
    let back = MatrixRecord::from_json(&json)?.to_density()?;
    println!("JSON round trip exact: {}", back.matrix() == rho.matrix());

    let mut bytes = Vec::new();
    rec.write_binary(&mut bytes)?;
    let back = MatrixRecord::read_binary(bytes.as_slice())?.to_density()?;
    println!("binary round trip ({} bytes) exact: {}", bytes.len(), back.matrix() == rho.matrix());

    let gamma = random_pbit(4, &RandomStream::new(2, "pbit", 0))?;
    let json = gamma.to_record().to_json()?;
    let restored = PrivateState::from_record(&GeneratorRecord::from_json(&json)?)?;
    let diff = restored.state().matrix() - gamma.state().matrix();
    println!("pbit rebuilt from saved generators differs by {:.2e}", diff.norm_l2());
    Ok(())
}
