//! Strings of a prescribed energy, with and without the witness index.

use dnaword::energy::{
    build, construct_strings, extract, free_energy, slow_build, EnergyBounds, ExactRing, ForkPolicy, GammaTable,
    StartPair,
};

fn main() -> dnaword::Result<()> {
    let table = GammaTable::synthetic_example();
    let len = 24;
    let ladder = build(len, &table, ExactRing)?;
    let profile = ladder.achievable_profile(len)?;
    let index = slow_build(&ladder)?;
    println!("witness index: {} entries, {} ops", index.len(), index.build_ops());

    for e in [profile.e_min, (profile.e_min + profile.e_max) / 2, profile.e_max] {
        match extract(e, &ladder, Some(&index), StartPair::Any) {
            Ok(w) => println!("E = {e}: {w} (FE {})", free_energy(&w, &table)?),
            Err(err) => println!("E = {e}: {err}"),
        }
    }
    let mid = (profile.e_min + profile.e_max) / 2;
    let scanned = extract(mid, &ladder, None, StartPair::Fixed(2, 1))?;
    println!("E = {mid} starting G, ending C, no index: {scanned}");

    let e0 = profile.e_min;
    let bounds = EnergyBounds { length: len, ranges: vec![(e0 + 10, e0 + 12), (e0 + 50, e0 + 60), (e0 + 100, e0 + 100)] };
    let built = construct_strings(&bounds, &ladder, ForkPolicy::Published)?;
    for (w, e) in built.words.iter().zip(&built.energies) {
        println!("window hit {e}: {w}");
    }
    Ok(())
}
