//! Run breaking on its own, then the full bounded-run generator.

use dnaword::verify::{all_hold, verify_all, ConstraintParams, GcFraction};
use dnaword::wordgen::{break_runs, fast_dwd_runs, Problem};
use dnaword::words::Word;

fn main() -> dnaword::Result<()> {
    for (text, d) in [("000000", 2), ("0000", 4), ("0001111100", 3)] {
        let x = Word::binary(text)?;
        println!("break_runs({x}, {d}) = {}", break_runs(&x, d)?);
    }

    let params = ConstraintParams { gamma: GcFraction::half(), d: 3, ..ConstraintParams::uniform(4) };
    let result = fast_dwd_runs(100, &params, 3)?;
    println!("binary length {}, final length {}", result.ell_base, result.final_length);
    println!("{}", result.words[0]);
    let reports = verify_all(&result.words, &params, None, &Problem::Runs.constraints())?;
    println!("C1, C2, C3, C7, C8 hold: {}", all_hold(&reports));
    Ok(())
}
