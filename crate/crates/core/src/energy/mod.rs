//! Integer free-energy model and bounded-energy string construction.
//!
//! The pieces, bottom-up:
//!
//! * [`GammaTable`] and [`free_energy`]: the pairwise energy model.
//! * [`ring`]: exact and modular coefficient rings with fast convolution.
//! * [`build`]: the halving ladder `Φ` of counting polynomials.
//! * [`count_dp`]: the quadratic baseline, used as an oracle.
//! * [`slow_build`]: the witness index `Ψ` that makes extraction linear.
//! * [`extract`] and [`construct_strings`]: strings of prescribed energy.
//!
//! The modular ring is the unit-cost model under which `build` runs in
//! `O(L log L)`; exact counts grow like `4^L` and cost more per coefficient.

mod dp;
mod ladder;
pub mod ring;
mod strings;
mod table;
mod witness;

pub use dp::{count_dp, count_dp_in};
pub use ladder::{build, ladder_lengths, CountLadder, EnergyPolynomial, Level, Profile};
pub use ring::{poly_multiply, CoeffRing, ExactRing, ModularRing, NttPrime, RingKind};
pub use strings::{
    construct_strings, extract, extract_counted, ConstructedStrings, EnergyBounds, ForkPolicy, StartPair,
};
pub use table::{free_energy, free_energy_symbols, GammaTable};
pub use witness::{slow_build, witness_is_valid, Witness, WitnessIndex};

/// Largest length for which the exact ring is the default.
pub const EXACT_RING_MAX_LENGTH: usize = 64;
