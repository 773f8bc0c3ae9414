//! Check a word-list file against chosen constraints and print the report.
//!
//! `cargo run --example verify_wordset -- words.txt 3`

use std::collections::BTreeSet;

use dnaword::verify::{verify_all, ConstraintId, ConstraintParams};
use dnaword::words::{parse_word_list, WordSet};

fn main() -> dnaword::Result<()> {
    let mut args = std::env::args().skip(1);
    let ws = match args.next() {
        Some(path) => parse_word_list(&std::fs::read_to_string(path)?)?,
        None => WordSet::parse_words(&["ACGTAC", "TTGACA", "GTACGT", "AAAAAA"])?,
    };
    let k: usize = args.next().map_or(3, |s| s.parse().expect("k must be an integer"));
    let params = ConstraintParams::uniform(k);
    let selection: BTreeSet<_> = ConstraintId::HAMMING.into_iter().collect();
    for report in verify_all(&ws, &params, None, &selection)? {
        for line in report.lines() {
            println!("{line}");
        }
        println!("{}: {}", report.constraint, if report.holds() { "ok" } else { "violated" });
    }
    Ok(())
}
