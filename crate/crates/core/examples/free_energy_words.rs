//! Words whose free energies fall in a narrow band.
//!
//! Uses the synthetic table in `data/`; pass another table file as the first
//! argument.

use dnaword::energy::{free_energy, GammaTable};
use dnaword::verify::{verify_all, all_hold, ConstraintParams};
use dnaword::wordgen::{fast_dwd_free_energy, Problem};

fn main() -> dnaword::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic_gamma.txt").to_string());
    let table: GammaTable = std::fs::read_to_string(path)?.parse()?;

    let params = ConstraintParams::uniform(4);
    let result = fast_dwd_free_energy(100, &params, &table, 5)?;
    let e = result.energy.as_ref().expect("energy path");
    println!("base words: FE in [{}, {}], D = {}", e.w_min, e.w_max, e.d);
    if e.padded {
        println!("padded to length {} with m = {}, alpha = {}, beta = {}, delta = {}", result.final_length, e.m, e.alpha, e.beta, e.delta);
    }
    let energies: Vec<u64> = result.words.iter().map(|w| free_energy(w, &table)).collect::<Result<_, _>>()?;
    let (lo, hi) = (energies.iter().min().unwrap(), energies.iter().max().unwrap());
    println!("output FE in [{lo}, {hi}], spread {} <= sigma {}", hi - lo, e.sigma);

    let reports = verify_all(&result.words, &result.verify_params(&params), Some(&table), &Problem::Energy.constraints())?;
    println!("C1..C6 and C9 hold: {}", all_hold(&reports));
    Ok(())
}
