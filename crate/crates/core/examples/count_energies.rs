//! Energy histograms from the halving ladder, checked against the
//! quadratic recurrence.

use dnaword::energy::{build, count_dp, ExactRing, GammaTable, ModularRing, NttPrime};

fn main() -> dnaword::Result<()> {
    let table = GammaTable::synthetic_example();
    let len = 10;
    let ladder = build(len, &table, ExactRing)?;
    let histogram = ladder.histogram(len)?;
    println!("length {len}: {} achievable energies", histogram.len());
    for (e, c) in histogram.iter().take(5) {
        println!("  {e}\t{c}");
    }
    let profile = ladder.achievable_profile(len)?;
    println!("E_min {}, E_max {}, largest gap {}", profile.e_min, profile.e_max, profile.delta);

    let dp = count_dp(len, &table)?;
    let same = (0..4u8).all(|a| (0..4u8).all(|b| ladder.top().poly(a, b).coeffs() == dp[(a * 4 + b) as usize].coeffs()));
    println!("ladder equals dp: {same}");

    let ring = ModularRing::new(NttPrime::default());
    let big = build(4096, &table, ring)?;
    println!("length 4096 mod {}: {} ops", ring.modulus(), big.build_ops());
    Ok(())
}
