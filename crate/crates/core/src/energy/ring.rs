//! Coefficient rings and polynomial multiplication.
//!
//! [`ExactRing`] keeps exact big-integer counts. [`ModularRing`] works modulo
//! a prime `p = c·2^32 + 1` and multiplies with a number-theoretic
//! transform, which is the unit-cost model the `O(L log L)` build assumes.
//!
//! Every multiplication adds the number of coefficient operations it performed
//! to an `ops` counter; the benchmark suites read these counts.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Below this many coefficients on either side, multiplication is schoolbook.
pub const SCHOOLBOOK_CUTOFF: usize = 32;

pub trait CoeffRing: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add_assign(&self, acc: &mut Self::Elem, x: &Self::Elem);
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an exact count in this ring.
    fn reduce(&self, x: &BigUint) -> Self::Elem;
    fn kind(&self) -> RingKind;

    /// Full convolution of two coefficient vectors.
    fn multiply(&self, p: &[Self::Elem], q: &[Self::Elem], ops: &mut u64) -> Vec<Self::Elem> {
        schoolbook(self, p, q, ops)
    }

    /// `C[a][b] = Σ_d A[a][d] · B[d][b]` for 4×4 matrices of polynomials
    /// stored row-major. All entries of `a` share one length, as do those of
    /// `b`.
    fn matrix_product(
        &self,
        a: &[Vec<Self::Elem>],
        b: &[Vec<Self::Elem>],
        ops: &mut u64,
    ) -> Vec<Vec<Self::Elem>> {
        let mut out = Vec::with_capacity(16);
        for row in 0..4 {
            for col in 0..4 {
                let mut acc: Option<Vec<Self::Elem>> = None;
                for d in 0..4 {
                    let prod = self.multiply(&a[row * 4 + d], &b[d * 4 + col], ops);
                    match acc.as_mut() {
                        None => acc = Some(prod),
                        Some(acc) => {
                            for (x, y) in acc.iter_mut().zip(&prod) {
                                self.add_assign(x, y);
                            }
                            *ops += prod.len() as u64;
                        }
                    }
                }
                out.push(acc.expect("four terms"));
            }
        }
        out
    }
}

/// Which ring a ladder or count was computed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    ExactBigInteger,
    ModularPrime(u64),
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::ExactBigInteger => write!(f, "exact"),
            RingKind::ModularPrime(p) => write!(f, "mod {p}"),
        }
    }
}

pub fn schoolbook<R: CoeffRing>(
    ring: &R,
    p: &[R::Elem],
    q: &[R::Elem],
    ops: &mut u64,
) -> Vec<R::Elem> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            let prod = ring.mul(a, b);
            ring.add_assign(&mut out[i + j], &prod);
        }
        *ops += q.len() as u64;
    }
    out
}

/// Exact counts as arbitrary-precision integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactRing;

impl CoeffRing for ExactRing {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn is_zero(&self, x: &BigUint) -> bool {
        x.is_zero()
    }

    fn add_assign(&self, acc: &mut BigUint, x: &BigUint) {
        *acc += x;
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }

    fn reduce(&self, x: &BigUint) -> BigUint {
        x.clone()
    }

    fn kind(&self) -> RingKind {
        RingKind::ExactBigInteger
    }

    fn multiply(&self, p: &[BigUint], q: &[BigUint], ops: &mut u64) -> Vec<BigUint> {
        if p.len().min(q.len()) < SCHOOLBOOK_CUTOFF {
            schoolbook(self, p, q, ops)
        } else {
            kronecker(p, q, ops)
        }
    }
}

/// Exact convolution by Kronecker substitution: pack each vector into one
/// big integer with slots wide enough that no product coefficient carries
/// into its neighbour, multiply once, unpack.
fn kronecker(p: &[BigUint], q: &[BigUint], ops: &mut u64) -> Vec<BigUint> {
    let bits = |v: &[BigUint]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let terms = p.len().min(q.len()) as u64;
    let slot = (bits(p) + bits(q) + (64 - terms.leading_zeros() as u64) + 1) as usize;
    let a = pack(p, slot);
    let b = pack(q, slot);
    let product = a * b;
    let out_len = p.len() + q.len() - 1;
    *ops += (p.len() + q.len() + out_len) as u64;
    unpack(&product, slot, out_len)
}

fn pack(v: &[BigUint], slot: usize) -> BigUint {
    let total_bits = slot * v.len();
    let mut digits = vec![0u32; total_bits / 32 + 2];
    for (i, x) in v.iter().enumerate() {
        let base = i * slot;
        for (k, d) in x.to_u32_digits().into_iter().enumerate() {
            let bit = base + k * 32;
            let (w, r) = (bit / 32, bit % 32);
            digits[w] |= d << r;
            if r != 0 {
                digits[w + 1] |= d >> (32 - r);
            }
        }
    }
    BigUint::new(digits)
}

fn unpack(x: &BigUint, slot: usize, count: usize) -> Vec<BigUint> {
    let digits = x.to_u32_digits();
    let get = |w: usize| digits.get(w).copied().unwrap_or(0);
    (0..count)
        .map(|i| {
            let base = i * slot;
            let words = slot.div_ceil(32);
            let mut out = Vec::with_capacity(words);
            for k in 0..words {
                let bit = base + k * 32;
                let (w, r) = (bit / 32, bit % 32);
                let mut d = get(w) >> r;
                if r != 0 {
                    d |= get(w + 1) << (32 - r);
                }
                let remaining = slot - k * 32;
                if remaining < 32 {
                    d &= (1u32 << remaining) - 1;
                }
                out.push(d);
            }
            BigUint::new(out)
        })
        .collect()
}

/// An NTT-friendly prime `p = c·2^32 + 1` with a primitive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NttPrime {
    p: u64,
    root: u64,
    two_adicity: u32,
}

impl NttPrime {
    /// Draws `c` uniformly until `c·2^32 + 1` is prime, giving a prime in
    /// `[2^50, 2^63)`.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e74_7470_7269_6d65);
        loop {
            let c: u64 = rng.gen_range((1u64 << 18)..(1u64 << 31));
            let p = (c << 32) + 1;
            if is_prime(p) {
                return NttPrime::with_cofactor(p, c);
            }
        }
    }

    /// A prime of the required shape from an explicit value, if it qualifies.
    pub fn new(p: u64) -> Option<Self> {
        if p < (1 << 33) || !(p - 1).is_multiple_of(1u64 << 32) || !is_prime(p) {
            return None;
        }
        Some(NttPrime::with_cofactor(p, (p - 1) >> 32))
    }

    fn with_cofactor(p: u64, c: u64) -> Self {
        let two_adicity = (p - 1).trailing_zeros();
        let mut factors = vec![2u64];
        let mut rest = c >> c.trailing_zeros();
        let mut f = 3;
        while f * f <= rest {
            if rest.is_multiple_of(f) {
                factors.push(f);
                while rest.is_multiple_of(f) {
                    rest /= f;
                }
            }
            f += 2;
        }
        if rest > 1 {
            factors.push(rest);
        }
        let root = (2..)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
            .expect("every prime has a primitive root");
        NttPrime { p, root, two_adicity }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn primitive_root(&self) -> u64 {
        self.root
    }

    pub fn max_transform_log2(&self) -> u32 {
        self.two_adicity
    }
}

impl Default for NttPrime {
    fn default() -> Self {
        NttPrime::from_seed(0)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Counts modulo an NTT prime.
#[derive(Clone, Copy, Debug)]
pub struct ModularRing {
    prime: NttPrime,
}

impl ModularRing {
    pub fn new(prime: NttPrime) -> Self {
        ModularRing { prime }
    }

    pub fn modulus(&self) -> u64 {
        self.prime.p
    }

    /// In-place iterative radix-2 transform; `a.len()` is a power of two.
    fn ntt(&self, a: &mut [u64], inverse: bool, ops: &mut u64) {
        let p = self.prime.p;
        let n = a.len();
        let log_n = n.trailing_zeros();
        assert!(log_n <= self.prime.two_adicity, "transform size exceeds prime's 2-adicity");
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w_len = pow_mod(self.prime.root, (p - 1) / len as u64, p);
            if inverse {
                w_len = pow_mod(w_len, p - 2, p);
            }
            let half = len / 2;
            let mut twiddles = Vec::with_capacity(half);
            let mut w = 1u64;
            for _ in 0..half {
                twiddles.push(w);
                w = mul_mod(w, w_len, p);
            }
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                    let u = *x;
                    let v = mul_mod(*y, w, p);
                    *x = add_mod(u, v, p);
                    *y = sub_mod(u, v, p);
                }
            }
            *ops += (n / 2) as u64;
            len <<= 1;
        }
        if inverse {
            let n_inv = pow_mod(n as u64, p - 2, p);
            for x in a.iter_mut() {
                *x = mul_mod(*x, n_inv, p);
            }
            *ops += n as u64;
        }
    }

    fn forward(&self, v: &[u64], size: usize, ops: &mut u64) -> Vec<u64> {
        let mut buf = vec![0u64; size];
        buf[..v.len()].copy_from_slice(v);
        self.ntt(&mut buf, false, ops);
        buf
    }
}

impl CoeffRing for ModularRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn add_assign(&self, acc: &mut u64, x: &u64) {
        *acc = add_mod(*acc, *x, self.prime.p);
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.prime.p)
    }

    fn reduce(&self, x: &BigUint) -> u64 {
        (x % BigUint::from(self.prime.p)).to_u64().expect("residue fits in u64")
    }

    fn kind(&self) -> RingKind {
        RingKind::ModularPrime(self.prime.p)
    }

    fn multiply(&self, p: &[u64], q: &[u64], ops: &mut u64) -> Vec<u64> {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        if p.len().min(q.len()) < SCHOOLBOOK_CUTOFF {
            return schoolbook(self, p, q, ops);
        }
        let out_len = p.len() + q.len() - 1;
        let size = out_len.next_power_of_two();
        let mut fp = self.forward(p, size, ops);
        let fq = self.forward(q, size, ops);
        for (x, y) in fp.iter_mut().zip(&fq) {
            *x = mul_mod(*x, *y, self.prime.p);
        }
        *ops += size as u64;
        self.ntt(&mut fp, true, ops);
        fp.truncate(out_len);
        fp
    }

    /// 32 forward transforms, 64 pointwise multiply-accumulates per
    /// frequency and 16 inverse transforms.
    fn matrix_product(&self, a: &[Vec<u64>], b: &[Vec<u64>], ops: &mut u64) -> Vec<Vec<u64>> {
        let (la, lb) = (a[0].len(), b[0].len());
        if la.min(lb) < SCHOOLBOOK_CUTOFF {
            let mut out = Vec::with_capacity(16);
            for row in 0..4 {
                for col in 0..4 {
                    let mut acc = vec![0u64; la + lb - 1];
                    for d in 0..4 {
                        let prod = schoolbook(self, &a[row * 4 + d], &b[d * 4 + col], ops);
                        for (x, y) in acc.iter_mut().zip(&prod) {
                            *x = add_mod(*x, *y, self.prime.p);
                        }
                        *ops += prod.len() as u64;
                    }
                    out.push(acc);
                }
            }
            return out;
        }
        let p = self.prime.p;
        let out_len = la + lb - 1;
        let size = out_len.next_power_of_two();
        let fa: Vec<Vec<u64>> = a.iter().map(|v| self.forward(v, size, ops)).collect();
        let fb: Vec<Vec<u64>> = b.iter().map(|v| self.forward(v, size, ops)).collect();
        let mut out = Vec::with_capacity(16);
        for row in 0..4 {
            for col in 0..4 {
                let mut acc = vec![0u64; size];
                for d in 0..4 {
                    let (x, y) = (&fa[row * 4 + d], &fb[d * 4 + col]);
                    for k in 0..size {
                        acc[k] = add_mod(acc[k], mul_mod(x[k], y[k], p), p);
                    }
                }
                *ops += 4 * size as u64;
                self.ntt(&mut acc, true, ops);
                acc.truncate(out_len);
                out.push(acc);
            }
        }
        out
    }
}

/// Convolution of `p` and `q` in `ring`.
pub fn poly_multiply<R: CoeffRing>(ring: &R, p: &[R::Elem], q: &[R::Elem]) -> Vec<R::Elem> {
    let mut ops = 0;
    ring.multiply(p, q, &mut ops)
}
