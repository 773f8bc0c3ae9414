//! Split witnesses: for a nonzero term `x^E` of `f_{l,a,b}`, a choice of
//! junction characters `(d1, d2)` and left energy `j` with both child terms
//! nonzero.

use std::collections::BTreeMap;

use super::ladder::{pair_index, CountLadder};
use super::ring::CoeffRing;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Last character of the left half.
    pub d1: u8,
    /// First character of the right half.
    pub d2: u8,
    /// Energy of the left half; the right half gets `E - j - Γ[d1][d2]`.
    pub left_energy: u64,
}

/// Finds the first witness in `(d1, d2, ascending j)` order, charging one op
/// per candidate examined.
pub(crate) fn find_split<R: CoeffRing>(
    ladder: &CountLadder<R>,
    len: usize,
    a: u8,
    b: u8,
    energy: u64,
    ops: &mut u64,
) -> Result<Option<Witness>> {
    let (l1, l2) = (len / 2, len - len / 2);
    let left = ladder.level(l1)?;
    let right = ladder.level(l2)?;
    let table = ladder.table();
    let e = energy as i64;
    for d1 in 0..4u8 {
        let lp = left.poly(a, d1);
        for d2 in 0..4u8 {
            *ops += 1;
            let rp = right.poly(d2, b);
            let rest = e - table.get(d1, d2) as i64;
            let lo = (lp.low() as i64).max(rest - rp.high() as i64);
            let hi = (lp.high() as i64).min(rest - rp.low() as i64);
            for j in lo..=hi {
                *ops += 1;
                if left.is_nonzero(a, d1, j) && right.is_nonzero(d2, b, rest - j) {
                    return Ok(Some(Witness { d1, d2, left_energy: j as u64 }));
                }
            }
        }
    }
    Ok(None)
}

/// `Ψ`: one witness per nonzero term of every non-leaf ladder level.
///
/// Entries are `None` only when a modular ladder lost a child term to a
/// false zero; with exact counts every nonzero term has a witness.
#[derive(Clone, Debug)]
pub struct WitnessIndex {
    levels: BTreeMap<usize, Level>,
    ops: u64,
}

#[derive(Clone, Debug)]
struct Level {
    low: u64,
    entries: Vec<Vec<Option<Witness>>>,
}

/// `Ψ ← SlowBuild(L)`.
pub fn slow_build<R: CoeffRing>(ladder: &CountLadder<R>) -> Result<WitnessIndex> {
    let mut ops = 0;
    let mut levels = BTreeMap::new();
    for len in ladder.lengths().filter(|&l| l > 1) {
        let level = ladder.level(len)?;
        let mut entries = Vec::with_capacity(16);
        for p in level.polys() {
            let mut row = vec![None; p.coeffs().len()];
            for (i, slot) in row.iter_mut().enumerate() {
                let energy = p.low() + i as u64;
                if level.is_nonzero(p.first(), p.last(), energy as i64) {
                    *slot = find_split(ladder, len, p.first(), p.last(), energy, &mut ops)?;
                }
            }
            entries.push(row);
        }
        levels.insert(len, Level { low: level.polys()[0].low(), entries });
    }
    Ok(WitnessIndex { levels, ops })
}

impl WitnessIndex {
    pub fn get(&self, len: usize, a: u8, b: u8, energy: u64) -> Option<Witness> {
        let level = self.levels.get(&len)?;
        let idx = energy.checked_sub(level.low)? as usize;
        level.entries[pair_index(a, b)].get(idx).copied().flatten()
    }

    pub fn build_ops(&self) -> u64 {
        self.ops
    }

    /// Every recorded witness, as `(len, a, b, energy, witness)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u8, u8, u64, Witness)> + '_ {
        self.levels.iter().flat_map(|(&len, level)| {
            level.entries.iter().enumerate().flat_map(move |(pi, row)| {
                row.iter().enumerate().filter_map(move |(i, w)| {
                    w.map(|w| (len, (pi / 4) as u8, (pi % 4) as u8, level.low + i as u64, w))
                })
            })
        })
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Re-checks one witness against the ladder.
pub fn witness_is_valid<R: CoeffRing>(
    ladder: &CountLadder<R>,
    len: usize,
    a: u8,
    b: u8,
    energy: u64,
    w: &Witness,
) -> Result<bool> {
    let (l1, l2) = (len / 2, len - len / 2);
    let right_energy = energy as i64 - w.left_energy as i64 - ladder.table().get(w.d1, w.d2) as i64;
    Ok(ladder.level(l1)?.is_nonzero(a, w.d1, w.left_energy as i64)
        && ladder.level(l2)?.is_nonzero(w.d2, b, right_energy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::ladder::build;
    use crate::energy::ring::ExactRing;
    use crate::energy::table::GammaTable;

    #[test]
    fn uniform_table_witnesses_are_forced() {
        let table = GammaTable::uniform(2);
        let ladder = build(9, &table, ExactRing).unwrap();
        let index = slow_build(&ladder).unwrap();
        assert!(!index.is_empty());
        for (len, a, b, energy, w) in index.iter() {
            assert!(witness_is_valid(&ladder, len, a, b, energy, &w).unwrap());
            assert_eq!(w.left_energy, 2 * (len as u64 / 2 - 1));
        }
    }

    #[test]
    fn every_nonzero_term_has_a_valid_witness() {
        let table = GammaTable::synthetic_example();
        let ladder = build(12, &table, ExactRing).unwrap();
        let index = slow_build(&ladder).unwrap();
        let mut terms = 0;
        for len in ladder.lengths().filter(|&l| l > 1) {
            for p in ladder.level(len).unwrap().polys() {
                for (i, c) in p.coeffs().iter().enumerate() {
                    if *c != num_bigint::BigUint::default() {
                        terms += 1;
                        let e = p.low() + i as u64;
                        let w = index.get(len, p.first(), p.last(), e).expect("witness recorded");
                        assert!(witness_is_valid(&ladder, len, p.first(), p.last(), e, &w).unwrap());
                    }
                }
            }
        }
        assert_eq!(terms, index.len());
    }
}
