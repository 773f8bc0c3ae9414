//! Two-bit-plane packing for fast mismatch counting.
//!
//! Symbol `s` at position `p` sets bit `p` of `lo` to `s & 1` and of `hi` to
//! `s >> 1`; two positions differ iff either plane differs there.

#[derive(Clone, Debug)]
pub(crate) struct Packed {
    lo: Vec<u64>,
    hi: Vec<u64>,
    len: usize,
}

impl Packed {
    pub fn new(symbols: &[u8]) -> Self {
        // one spare limb so unaligned reads never go out of bounds
        let limbs = symbols.len() / 64 + 2;
        let mut lo = vec![0u64; limbs];
        let mut hi = vec![0u64; limbs];
        for (p, &s) in symbols.iter().enumerate() {
            lo[p / 64] |= ((s & 1) as u64) << (p % 64);
            hi[p / 64] |= ((s >> 1) as u64) << (p % 64);
        }
        Packed { lo, hi, len: symbols.len() }
    }

    #[inline]
    fn read(plane: &[u64], bit: usize) -> u64 {
        let (q, r) = (bit / 64, bit % 64);
        let mut v = plane[q] >> r;
        if r != 0 {
            v |= plane[q + 1] << (64 - r);
        }
        v
    }
}

/// `H(a[1..l-s], b[s+1..l])`: the length-`(l - s)` prefix of `a` against the
/// suffix of `b` of the same length.
#[inline]
pub(crate) fn shifted_hamming(a: &Packed, b: &Packed, shift: usize) -> usize {
    debug_assert_eq!(a.len, b.len);
    debug_assert!(shift < a.len);
    let n = a.len - shift;
    let mut total = 0u32;
    let mut done = 0;
    let mut limb = 0;
    while done < n {
        let take = (n - done).min(64);
        let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
        let bl = Packed::read(&b.lo, shift + done);
        let bh = Packed::read(&b.hi, shift + done);
        let diff = ((a.lo[limb] ^ bl) | (a.hi[limb] ^ bh)) & mask;
        total += diff.count_ones();
        done += take;
        limb += 1;
    }
    total as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::hamming_symbols;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_bytewise_count(
            (a, b, shift) in (1usize..200).prop_flat_map(|len| (
                proptest::collection::vec(0u8..4, len),
                proptest::collection::vec(0u8..4, len),
                0..len,
            ))
        ) {
            let n = a.len() - shift;
            let expected = hamming_symbols(&a[..n], &b[shift..]);
            prop_assert_eq!(shifted_hamming(&Packed::new(&a), &Packed::new(&b), shift), expected);
        }
    }
}
