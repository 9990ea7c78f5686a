//! Independent bits and their four rate scenarios.

use pbits::entropics::rate_region;
use pbits::randmat::RandomStream;
use pbits::states::random_ibit;

fn main() -> pbits::Result<()> {
    let ibit = random_ibit(16, &RandomStream::new(3, "ibit", 0))?;
    let e = ibit.entropies()?;
    println!("S(AA') = {:.4}, S(B') = {:.4}, S(AA'B') = {:.4}", e.s_aa, e.s_b, e.s_aab);
    for scenario in 1..=4 {
        let r = rate_region(&ibit, scenario)?;
        println!("scenario {scenario}: R_A = {:.4}, R_B = {:.4}, R_G = {:.4}", r.r_a, r.r_b, r.r_g);
    }
    let r = rate_region(&ibit, 1)?;
    for (name, ok) in &r.condition_flags {
        println!("  {name}: {ok}");
    }
    Ok(())
}
