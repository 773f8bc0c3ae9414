//! Words with an exact GC count, plus the mapping step on its own.

use dnaword::verify::{verify_gc_content, ConstraintParams, GcFraction};
use dnaword::wordgen::{fast_dwd_gc, gc_map, GcPositionPolicy};
use dnaword::words::Word;

fn main() -> dnaword::Result<()> {
    let gamma: GcFraction = "0.45".parse()?;
    for text in ["0101", "0011", "1111"] {
        let bits = Word::binary(text)?;
        let first = gc_map(&bits, GcFraction::half(), GcPositionPolicy::FirstPositions)?;
        let spread = gc_map(&bits, GcFraction::half(), GcPositionPolicy::RunPreserving)?;
        println!("{bits} -> {first} (first positions), {spread} (run preserving)");
    }

    let params = ConstraintParams { gamma, ..ConstraintParams::uniform(4) };
    let result = fast_dwd_gc(50, &params, 11)?;
    let target = gamma.gc_target(result.final_length);
    println!("50 words of length {}, each with {target} G/C", result.final_length);
    println!("{}", result.words[0]);
    println!("C7 holds: {}", verify_gc_content(&result.words, gamma)?.holds());
    Ok(())
}
