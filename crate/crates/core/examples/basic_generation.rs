//! Generate a word set for the six Hamming-family constraints and certify it.
//!
//! `cargo run --example basic_generation -- 100 4 7` (n, k, seed)

use dnaword::verify::{all_hold, verify_all, ConstraintParams};
use dnaword::wordgen::{fast_dwd_basic, Problem};

fn main() -> dnaword::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (n, k, seed) = (*args.first().unwrap_or(&100) as usize, *args.get(1).unwrap_or(&4) as usize, *args.get(2).unwrap_or(&7));

    let params = ConstraintParams::uniform(k);
    let result = fast_dwd_basic(n, &params, seed)?;
    println!("{} words of length {} (k = {})", result.words.len(), result.final_length, result.k);
    for w in result.words.iter().take(5) {
        println!("  {w}");
    }

    let reports = verify_all(&result.words, &params, None, &Problem::Basic.constraints())?;
    for r in &reports {
        println!("{}: {} violations", r.constraint, r.offenders.len());
    }
    println!("all constraints hold: {}", all_hold(&reports));
    Ok(())
}
