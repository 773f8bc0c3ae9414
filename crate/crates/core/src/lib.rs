//! Randomized design of DNA word sets under combinatorial constraints.
//!
//! The crate generates `n` equal-length DNA words that satisfy selectable
//! constraints (Hamming-family distances, GC content, bounded runs and a
//! pairwise free-energy spread) at word lengths within a constant factor of
//! optimal, and ships naive verifiers for every constraint so each generated
//! set can be certified after the fact.
//!
//! Modules:
//!
//! * [`words`]: alphabets, words, word sets and their text formats.
//! * [`verify`]: trusted verifiers for constraints C1 through C9.
//! * [`wordgen`]: the four one-shot randomized generators.
//! * [`energy`]: the integer free-energy model, counting polynomials,
//!   fast convolution and bounded-energy string construction.
//! * [`bench`]: instrumented benchmark suites used by the `bench` command.
//! * [`cli`]: the `dnaword` command-line front end.

pub mod bench;
pub mod cli;
pub mod energy;
mod error;
pub mod verify;
pub mod wordgen;
pub mod words;

pub use error::{Error, Result};
