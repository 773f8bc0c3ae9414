//! Quadratic dynamic-programming counts, the baseline and oracle for
//! [`build`](super::build).

use num_bigint::BigUint;

use super::ladder::{level_from_coeffs, pair_index, unit_level, EnergyPolynomial};
use super::ring::{CoeffRing, ExactRing};
use super::table::GammaTable;
use crate::{Error, Result};

/// Exact `f_{L,a,b}` for all sixteen `(a, b)`, indexed `a * 4 + b`, grown one
/// character at a time.
pub fn count_dp(length: usize, table: &GammaTable) -> Result<Vec<EnergyPolynomial<BigUint>>> {
    let mut ops = 0;
    count_dp_in(length, table, &ExactRing, &mut ops)
}

/// [`count_dp`] in an arbitrary ring, counting coefficient additions.
pub fn count_dp_in<R: CoeffRing>(
    length: usize,
    table: &GammaTable,
    ring: &R,
    ops: &mut u64,
) -> Result<Vec<EnergyPolynomial<R::Elem>>> {
    if length == 0 {
        return Err(Error::invalid("length must be at least 1"));
    }
    let d = table.spread() as usize;
    let g_min = table.gamma_min();
    let mut state: Vec<Vec<R::Elem>> = unit_level(ring).polys().iter().map(|p| p.coeffs().to_vec()).collect();
    for len in 1..length {
        // strings of length len+1 span len·D + 1 energies
        let mut next = vec![vec![ring.zero(); len * d + 1]; 16];
        for a in 0..4u8 {
            for b in 0..4u8 {
                let src = &state[pair_index(a, b)];
                for c in 0..4u8 {
                    let offset = (table.get(b, c) - g_min) as usize;
                    let dst = &mut next[pair_index(a, c)][offset..offset + src.len()];
                    for (x, y) in dst.iter_mut().zip(src) {
                        ring.add_assign(x, y);
                    }
                    *ops += src.len() as u64;
                }
            }
        }
        state = next;
    }
    Ok(level_from_coeffs(ring, length, table, state).polys().to_vec())
}
