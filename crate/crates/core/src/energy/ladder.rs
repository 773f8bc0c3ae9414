//! Counting polynomials and the halving ladder.
//!
//! `f_{l,a,b}(x) = Σ_z ζ_z x^z` where `ζ_z` counts length-`l` strings that
//! start with `a`, end with `b` and have energy `z`. Lengths add through
//!
//! ```text
//! f_{l1+l2,a,b} = Σ_{d1,d2} f_{l1,a,d1} · f_{l2,d2,b} · x^{Γ[d1][d2]}
//! ```
//!
//! so the polynomials for `L` follow from those for `⌊L/2⌋` and `⌈L/2⌉`.
//! Coefficients are stored densely from the lowest possible energy
//! `(l-1)·Γ_min` up to `(l-1)·Γ_max`.

use std::collections::{BTreeMap, BTreeSet};

use super::ring::CoeffRing;
use super::table::GammaTable;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyPolynomial<E> {
    pub(crate) length: usize,
    pub(crate) first: u8,
    pub(crate) last: u8,
    pub(crate) low: u64,
    pub(crate) coeffs: Vec<E>,
}

impl<E> EnergyPolynomial<E> {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn first(&self) -> u8 {
        self.first
    }

    pub fn last(&self) -> u8 {
        self.last
    }

    /// Energy of `coeffs()[0]`.
    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn high(&self) -> u64 {
        self.low + self.coeffs.len() as u64 - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// `ζ_z`, or `None` outside the stored range (where it is zero).
    pub fn coefficient(&self, energy: u64) -> Option<&E> {
        energy.checked_sub(self.low).and_then(|i| self.coeffs.get(i as usize))
    }
}

/// Index of `f_{·,a,b}` within a level.
#[inline]
pub(crate) fn pair_index(a: u8, b: u8) -> usize {
    a as usize * 4 + b as usize
}

/// The sixteen polynomials of one length plus their nonzero masks.
#[derive(Clone, Debug)]
pub struct Level<E> {
    length: usize,
    polys: Vec<EnergyPolynomial<E>>,
    nonzero: Vec<Vec<bool>>,
}

impl<E> Level<E> {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn poly(&self, a: u8, b: u8) -> &EnergyPolynomial<E> {
        &self.polys[pair_index(a, b)]
    }

    pub fn polys(&self) -> &[EnergyPolynomial<E>] {
        &self.polys
    }

    #[inline]
    pub(crate) fn is_nonzero(&self, a: u8, b: u8, energy: i64) -> bool {
        let p = &self.polys[pair_index(a, b)];
        let idx = energy - p.low as i64;
        idx >= 0 && (idx as usize) < p.coeffs.len() && self.nonzero[pair_index(a, b)][idx as usize]
    }

    pub(crate) fn low(&self) -> u64 {
        self.polys[0].low
    }

    pub(crate) fn span(&self) -> usize {
        self.polys[0].coeffs.len()
    }
}

fn make_level<R: CoeffRing>(ring: &R, length: usize, low: u64, coeffs: Vec<Vec<R::Elem>>) -> Level<R::Elem> {
    let nonzero = coeffs.iter().map(|c| c.iter().map(|x| !ring.is_zero(x)).collect()).collect();
    let polys = coeffs
        .into_iter()
        .enumerate()
        .map(|(i, coeffs)| EnergyPolynomial { length, first: (i / 4) as u8, last: (i % 4) as u8, low, coeffs })
        .collect();
    Level { length, polys, nonzero }
}

pub(crate) fn unit_level<R: CoeffRing>(ring: &R) -> Level<R::Elem> {
    let coeffs = (0..16)
        .map(|i| vec![if i / 4 == i % 4 { ring.one() } else { ring.zero() }])
        .collect();
    make_level(ring, 1, 0, coeffs)
}

pub(crate) fn level_from_coeffs<R: CoeffRing>(
    ring: &R,
    length: usize,
    table: &GammaTable,
    coeffs: Vec<Vec<R::Elem>>,
) -> Level<R::Elem> {
    make_level(ring, length, (length as u64 - 1) * table.gamma_min(), coeffs)
}

/// Assembles the level of length `left.length + right.length`.
pub(crate) fn combine<R: CoeffRing>(
    ring: &R,
    table: &GammaTable,
    left: &Level<R::Elem>,
    right: &Level<R::Elem>,
    ops: &mut u64,
) -> Level<R::Elem> {
    let d = table.spread() as usize;
    let g_min = table.gamma_min();
    let l2 = right.length;
    // R'[d1][b] = Σ_{d2} x^{Γ[d1][d2] - Γ_min} f_{l2,d2,b}, based at l2·Γ_min
    let shifted_len = l2 * d + 1;
    let mut shifted = Vec::with_capacity(16);
    for d1 in 0..4u8 {
        for b in 0..4u8 {
            let mut acc = vec![ring.zero(); shifted_len];
            for d2 in 0..4u8 {
                let offset = (table.get(d1, d2) - g_min) as usize;
                let src = &right.poly(d2, b).coeffs;
                for (k, x) in src.iter().enumerate() {
                    ring.add_assign(&mut acc[offset + k], x);
                }
                *ops += src.len() as u64;
            }
            shifted.push(acc);
        }
    }
    let lefts: Vec<Vec<R::Elem>> = left.polys.iter().map(|p| p.coeffs.clone()).collect();
    let coeffs = ring.matrix_product(&lefts, &shifted, ops);
    level_from_coeffs(ring, left.length + right.length, table, coeffs)
}

/// Every length reachable from `target` by floor/ceil halving, plus `target`.
pub fn ladder_lengths(target: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack = vec![target];
    while let Some(len) = stack.pop() {
        if out.insert(len) && len > 1 {
            stack.push(len / 2);
            stack.push(len - len / 2);
        }
    }
    out
}

/// Energies with a nonzero count at one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    pub e_min: u64,
    pub e_max: u64,
    /// Largest gap between consecutive achievable energies, 0 if only one.
    pub delta: u64,
}

/// `Φ`: the counting polynomials for every ladder length.
#[derive(Clone, Debug)]
pub struct CountLadder<R: CoeffRing> {
    ring: R,
    table: GammaTable,
    target: usize,
    levels: BTreeMap<usize, Level<R::Elem>>,
    ops: u64,
}

/// `Φ ← Build(L)`: builds every ladder level bottom-up with fast
/// multiplication in `ring`.
pub fn build<R: CoeffRing>(target: usize, table: &GammaTable, ring: R) -> Result<CountLadder<R>> {
    if target == 0 {
        return Err(Error::invalid("ladder length must be at least 1"));
    }
    let mut ops = 0;
    let mut levels = BTreeMap::new();
    for len in ladder_lengths(target) {
        let level = if len == 1 {
            unit_level(&ring)
        } else {
            let (l1, l2) = (len / 2, len - len / 2);
            combine(&ring, table, &levels[&l1], &levels[&l2], &mut ops)
        };
        levels.insert(len, level);
    }
    Ok(CountLadder { ring, table: *table, target, levels, ops })
}

impl<R: CoeffRing> CountLadder<R> {
    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn table(&self) -> &GammaTable {
        &self.table
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Coefficient operations spent building.
    pub fn build_ops(&self) -> u64 {
        self.ops
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.keys().copied()
    }

    pub fn level(&self, len: usize) -> Result<&Level<R::Elem>> {
        self.levels
            .get(&len)
            .ok_or_else(|| Error::invalid(format!("length {len} is not a level of this ladder")))
    }

    pub fn top(&self) -> &Level<R::Elem> {
        &self.levels[&self.target]
    }

    /// `Σ_{a,b} f_{len,a,b}` as `(energy, count)` pairs with nonzero count.
    pub fn histogram(&self, len: usize) -> Result<Vec<(u64, R::Elem)>> {
        let level = self.level(len)?;
        let mut sum = vec![self.ring.zero(); level.span()];
        for p in &level.polys {
            for (acc, x) in sum.iter_mut().zip(&p.coeffs) {
                self.ring.add_assign(acc, x);
            }
        }
        let low = level.low();
        Ok(sum
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| (low + i as u64, c))
            .collect())
    }

    /// Sorted energies achievable by some string of length `len`.
    pub fn achievable_energies(&self, len: usize) -> Result<Vec<u64>> {
        let level = self.level(len)?;
        let low = level.low();
        Ok((0..level.span())
            .filter(|&i| level.nonzero.iter().any(|m| m[i]))
            .map(|i| low + i as u64)
            .collect())
    }

    /// `(E_min, E_max, Δ)` over the aggregate polynomial at `len`.
    pub fn achievable_profile(&self, len: usize) -> Result<Profile> {
        let energies = self.achievable_energies(len)?;
        let (Some(&e_min), Some(&e_max)) = (energies.first(), energies.last()) else {
            return Err(Error::Internal(format!("no achievable energy at length {len}")));
        };
        let delta = energies.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        Ok(Profile { e_min, e_max, delta })
    }

    /// Recomputes level `len` from its two children and compares.
    pub fn check_identity(&self, len: usize) -> Result<bool> {
        let level = self.level(len)?;
        if len == 1 {
            let unit = unit_level(&self.ring);
            return Ok(unit.polys == level.polys);
        }
        let (l1, l2) = (len / 2, len - len / 2);
        let mut ops = 0;
        let again = combine(&self.ring, &self.table, self.level(l1)?, self.level(l2)?, &mut ops);
        Ok(again.polys == level.polys)
    }
}
