//! Extraction of strings with a prescribed energy, and bounded-energy
//! strand generation on top of it.

use super::ladder::CountLadder;
use super::ring::CoeffRing;
use super::table::free_energy_symbols;
use super::witness::{find_split, slow_build, WitnessIndex};
use crate::words::{Alphabet, Word};
use crate::{Error, Result};

/// Which `f_{L,a,b}` extraction starts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StartPair {
    /// The lexicographically first `(a, b)` with a nonzero term.
    #[default]
    Any,
    Fixed(u8, u8),
}

/// `Extract(E, Φ, Ψ)`: a length-`L` word of energy `energy`.
///
/// With an index each level costs one lookup; without one the split is found
/// by scanning child coefficients. Both walks follow `(a, b, d1, d2,
/// ascending j)` order.
pub fn extract<R: CoeffRing>(
    energy: u64,
    ladder: &CountLadder<R>,
    index: Option<&WitnessIndex>,
    start: StartPair,
) -> Result<Word> {
    let mut ops = 0;
    extract_counted(energy, ladder, index, start, &mut ops)
}

/// [`extract`], adding the operations spent to `ops`.
pub fn extract_counted<R: CoeffRing>(
    energy: u64,
    ladder: &CountLadder<R>,
    index: Option<&WitnessIndex>,
    start: StartPair,
    ops: &mut u64,
) -> Result<Word> {
    let len = ladder.target();
    let top = ladder.top();
    let not_found = || Error::NotAchievable { energy, length: len };
    let (a, b) = match start {
        StartPair::Fixed(a, b) => {
            if a > 3 || b > 3 {
                return Err(Error::invalid("start pair characters must be DNA codes 0..4"));
            }
            if !top.is_nonzero(a, b, energy as i64) {
                return Err(not_found());
            }
            (a, b)
        }
        StartPair::Any => (0..16u8)
            .map(|i| (i / 4, i % 4))
            .find(|&(a, b)| top.is_nonzero(a, b, energy as i64))
            .ok_or_else(not_found)?,
    };
    let mut out = vec![0u8; len];
    fill(ladder, index, len, a, b, energy, &mut out, ops)?;
    let word = Word::new(Alphabet::Dna, out)?;
    if len >= 2 && free_energy_symbols(word.symbols(), ladder.table()) != energy {
        return Err(Error::Internal(format!("extracted word {word} does not have energy {energy}")));
    }
    Ok(word)
}

#[allow(clippy::too_many_arguments)]
fn fill<R: CoeffRing>(
    ladder: &CountLadder<R>,
    index: Option<&WitnessIndex>,
    len: usize,
    a: u8,
    b: u8,
    energy: u64,
    out: &mut [u8],
    ops: &mut u64,
) -> Result<()> {
    if len == 1 {
        if a != b || energy != 0 {
            return Err(Error::Internal("inconsistent single-character split".into()));
        }
        out[0] = a;
        return Ok(());
    }
    let witness = match index {
        Some(ix) => {
            *ops += 1;
            ix.get(len, a, b, energy)
        }
        None => find_split(ladder, len, a, b, energy, ops)?,
    };
    // a modular false zero can hide the only split
    let w = witness.ok_or(Error::NotAchievable { energy, length: ladder.target() })?;
    let l1 = len / 2;
    let right_energy = energy - w.left_energy - ladder.table().get(w.d1, w.d2);
    let (left_out, right_out) = out.split_at_mut(l1);
    fill(ladder, index, l1, a, w.d1, w.left_energy, left_out, ops)?;
    fill(ladder, index, len - l1, w.d2, b, right_energy, right_out, ops)
}

/// Inclusive energy windows `[A_i, B_i]` for strings of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyBounds {
    pub length: usize,
    pub ranges: Vec<(u64, u64)>,
}

/// When [`construct_strings`] pays for a witness index.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ForkPolicy {
    /// Build the index iff `n >= sqrt(L / ln L)`.
    #[default]
    Published,
    /// Build the index iff `n >= factor * sqrt(L / ln L)`.
    Scaled(f64),
    Always,
    Never,
}

impl ForkPolicy {
    pub fn wants_index(self, n: usize, length: usize) -> bool {
        let threshold = |factor: f64| {
            if length < 3 {
                0.0
            } else {
                factor * (length as f64 / (length as f64).ln()).sqrt()
            }
        };
        match self {
            ForkPolicy::Published => n as f64 >= threshold(1.0),
            ForkPolicy::Scaled(f) => n as f64 >= threshold(f),
            ForkPolicy::Always => true,
            ForkPolicy::Never => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructedStrings {
    pub words: Vec<Word>,
    /// `E_i`, the energy of each output word.
    pub energies: Vec<u64>,
    pub used_index: bool,
    /// Operations spent in the witness index build and in extraction.
    pub ops: u64,
}

/// `ConstructStrings({A_i}, {B_i}, L)` on a prebuilt ladder for `L`.
///
/// Each output takes the smallest achievable energy inside its window.
pub fn construct_strings<R: CoeffRing>(
    bounds: &EnergyBounds,
    ladder: &CountLadder<R>,
    fork: ForkPolicy,
) -> Result<ConstructedStrings> {
    if bounds.length != ladder.target() {
        return Err(Error::invalid(format!(
            "bounds ask for length {} but the ladder was built for {}",
            bounds.length,
            ladder.target()
        )));
    }
    if let Some((i, &(a, b))) = bounds.ranges.iter().enumerate().find(|(_, r)| r.0 > r.1) {
        return Err(Error::invalid(format!("request {} has empty window [{a}, {b}]", i + 1)));
    }
    let achievable = ladder.achievable_energies(bounds.length)?;
    let energies = bounds
        .ranges
        .iter()
        .enumerate()
        .map(|(i, &(low, high))| {
            let pos = achievable.partition_point(|&e| e < low);
            match achievable.get(pos) {
                Some(&e) if e <= high => Ok(e),
                _ => Err(Error::NoEnergyInRange { index: i + 1, low, high }),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let used_index = fork.wants_index(bounds.ranges.len(), bounds.length);
    let index = if used_index { Some(slow_build(ladder)?) } else { None };
    let mut ops = index.as_ref().map_or(0, |ix| ix.build_ops());
    let words = energies
        .iter()
        .map(|&e| extract_counted(e, ladder, index.as_ref(), StartPair::Any, &mut ops))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstructedStrings { words, energies, used_index, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::ladder::build;
    use crate::energy::ring::{ExactRing, ModularRing, NttPrime};
    use crate::energy::table::{free_energy, GammaTable};

    #[test]
    fn uniform_table_any_word_qualifies() {
        let ladder = build(4, &GammaTable::uniform(1), ExactRing).unwrap();
        let w = extract(3, &ladder, None, StartPair::Any).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(free_energy(&w, ladder.table()).unwrap(), 3);
        let w = extract(3, &ladder, None, StartPair::Fixed(2, 1)).unwrap();
        assert_eq!((w.symbols()[0], w.symbols()[3]), (2, 1));
    }

    #[test]
    fn unreachable_energies_are_not_found() {
        let table = GammaTable::synthetic_example();
        let ladder = build(6, &table, ExactRing).unwrap();
        let profile = ladder.achievable_profile(6).unwrap();
        assert!(matches!(
            extract(profile.e_min - 1, &ladder, None, StartPair::Any),
            Err(Error::NotAchievable { .. })
        ));
        assert!(extract(profile.e_max + 1, &ladder, None, StartPair::Any).is_err());
        assert!(extract(profile.e_min, &ladder, None, StartPair::Any).is_ok());
    }

    #[test]
    fn index_and_scan_walks_agree() {
        let table = GammaTable::synthetic_example();
        let ladder = build(37, &table, ModularRing::new(NttPrime::default())).unwrap();
        let index = slow_build(&ladder).unwrap();
        for e in ladder.achievable_energies(37).unwrap() {
            let a = extract(e, &ladder, Some(&index), StartPair::Any).unwrap();
            let b = extract(e, &ladder, None, StartPair::Any).unwrap();
            assert_eq!(a, b);
            assert_eq!(free_energy(&a, &table).unwrap(), e);
        }
    }

    #[test]
    fn construct_strings_picks_smallest_energy_in_window() {
        let ladder = build(5, &GammaTable::uniform(1), ExactRing).unwrap();
        let bounds = EnergyBounds { length: 5, ranges: vec![(4, 4); 3] };
        let out = construct_strings(&bounds, &ladder, ForkPolicy::Published).unwrap();
        assert_eq!(out.words.len(), 3);
        assert!(out.energies.iter().all(|&e| e == 4));

        let table = GammaTable::synthetic_example();
        let ladder = build(8, &table, ExactRing).unwrap();
        let p = ladder.achievable_profile(8).unwrap();
        let bounds = EnergyBounds { length: 8, ranges: vec![(p.e_min, p.e_max), (0, p.e_min)] };
        let out = construct_strings(&bounds, &ladder, ForkPolicy::Never).unwrap();
        assert_eq!(out.energies, vec![p.e_min, p.e_min]);
        assert!(!out.used_index);

        let bad = EnergyBounds { length: 8, ranges: vec![(p.e_max + 1, p.e_max + 5)] };
        assert!(matches!(
            construct_strings(&bad, &ladder, ForkPolicy::Always),
            Err(Error::NoEnergyInRange { index: 1, .. })
        ));
        let wrong_len = EnergyBounds { length: 7, ranges: vec![(0, 100)] };
        assert!(construct_strings(&wrong_len, &ladder, ForkPolicy::Never).is_err());
    }

    #[test]
    fn fork_threshold() {
        // sqrt(1024 / ln 1024) ~ 12.2
        assert!(!ForkPolicy::Published.wants_index(12, 1024));
        assert!(ForkPolicy::Published.wants_index(13, 1024));
        assert!(ForkPolicy::Published.wants_index(1, 2));
        assert!(!ForkPolicy::Never.wants_index(1_000_000, 10));
    }
}
