//! Randomized word-set generators and their building blocks.
//!
//! Every generator is one-shot Monte Carlo: words are drawn once and never
//! repaired. Word `i` comes from substream `i` of the master seed, so output
//! does not depend on the thread count.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{
    build, construct_strings, free_energy_symbols, CoeffRing, CountLadder, EnergyBounds, ExactRing,
    ForkPolicy, GammaTable, ModularRing, NttPrime, EXACT_RING_MAX_LENGTH,
};
use crate::verify::{ConstraintId, ConstraintParams, GcFraction};
use crate::words::{seeded_word, Alphabet, StreamSeed, Word, WordSet};
use crate::{Error, Result};

/// Which constraint family a generator targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Problem {
    /// C1..C6.
    Basic,
    /// C1..C7.
    Gc,
    /// C1, C2, C3, C7, C8.
    Runs,
    /// C1..C6 and C9.
    Energy,
}

impl Problem {
    pub const ALL: [Problem; 4] = [Problem::Basic, Problem::Gc, Problem::Runs, Problem::Energy];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Basic => "basic",
            Problem::Gc => "gc",
            Problem::Runs => "runs",
            Problem::Energy => "energy",
        }
    }

    /// `DWD123456` and friends.
    pub fn label(self) -> &'static str {
        match self {
            Problem::Basic => "DWD123456",
            Problem::Gc => "DWD1234567",
            Problem::Runs => "DWD12378",
            Problem::Energy => "DWD1234569",
        }
    }

    /// The constraints the generator's output is meant to satisfy.
    pub fn constraints(self) -> BTreeSet<ConstraintId> {
        use ConstraintId::*;
        match self {
            Problem::Basic => [C1, C2, C3, C4, C5, C6].into(),
            Problem::Gc => [C1, C2, C3, C4, C5, C6, C7].into(),
            Problem::Runs => [C1, C2, C3, C7, C8].into(),
            Problem::Energy => [C1, C2, C3, C4, C5, C6, C9].into(),
        }
    }

    /// The `k` the length formula uses.
    pub fn k(self, params: &ConstraintParams) -> usize {
        match self {
            Problem::Runs => params.k[..3].iter().copied().max().unwrap_or(0),
            _ => params.k_max(),
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s || p.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown problem {s:?}; expected basic, gc, runs or energy")))
    }
}

/// Smallest `e` with `base^e >= n`; 0 for `n <= 1`.
pub fn ceil_log(n: usize, base: usize) -> usize {
    let mut e = 0;
    let mut p: u128 = 1;
    while p < n as u128 {
        p *= base as u128;
        e += 1;
    }
    e
}

/// `9·max{k, ⌈log₄ n⌉, 1}`.
pub fn basic_length(n: usize, k: usize) -> usize {
    9 * k.max(ceil_log(n, 4)).max(1)
}

/// `10·max{k, ⌈log₂ n⌉, 1}`, the binary length of the GC and runs paths.
pub fn gc_length(n: usize, k: usize) -> usize {
    10 * k.max(ceil_log(n, 2)).max(1)
}

/// Number of left (and of right) inserts [`break_runs`] makes.
pub fn break_runs_inserts(len: usize, d: usize) -> usize {
    len.div_ceil(2 * (d - 1)).saturating_sub(1)
}

/// Length of [`break_runs`] output: `len + 2t + 1`.
pub fn break_runs_length(len: usize, d: usize) -> usize {
    len + 2 * break_runs_inserts(len, d) + 1
}

/// Which positions [`gc_map`] sends to G/C.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GcPositionPolicy {
    /// The first `⌈γ·len⌉` positions.
    #[default]
    FirstPositions,
    /// Greedy left to right: switch class whenever the bit repeats, as far
    /// as the quota allows.
    RunPreserving,
}

/// Maps a binary word to DNA with exactly `⌈γ·len⌉` G/C characters.
///
/// At a G/C position 0 becomes G and 1 becomes C; elsewhere 0 becomes A and
/// 1 becomes T.
pub fn gc_map(word: &Word, gamma: GcFraction, policy: GcPositionPolicy) -> Result<Word> {
    if word.alphabet() != Alphabet::Binary {
        return Err(Error::invalid("gc_map expects a binary word"));
    }
    let bits = word.symbols();
    let len = bits.len();
    let quota = gamma.gc_target(len);
    let mut out = Vec::with_capacity(len);
    let mut left = quota;
    let mut prev_gc = false;
    for (i, &bit) in bits.iter().enumerate() {
        let remaining = len - i;
        let gc = match policy {
            GcPositionPolicy::FirstPositions => i < quota,
            GcPositionPolicy::RunPreserving => {
                if left == 0 {
                    false
                } else if left == remaining {
                    true
                } else if i > 0 && bits[i - 1] == bit {
                    !prev_gc
                } else {
                    true
                }
            }
        };
        if gc {
            left -= 1;
        }
        prev_gc = gc;
        out.push(dna_image(bit, gc));
    }
    Word::new(Alphabet::Dna, out)
}

fn dna_image(bit: u8, gc: bool) -> u8 {
    // codes: A=0 C=1 G=2 T=3
    match (bit, gc) {
        (0, true) => 2,
        (_, true) => 1,
        (0, false) => 0,
        (_, false) => 3,
    }
}

/// Inserts complement characters so that no run exceeds `d`.
///
/// With `t = ⌈len/(2(d−1))⌉ − 1` and 1-based positions: for `i = 1..t` the
/// complement of `x[i(d−1)+1]` goes just before that position and the
/// complement of `x[len−i(d−1)]` just after that position; the complement of
/// `x[⌊len/2⌋]` goes just after `⌊len/2⌋`. Inserts sharing a gap are ordered
/// mid, left, right. The layout is mirror-symmetric, which is what keeps
/// reverse-complement distances from shrinking on even lengths.
pub fn break_runs(x: &Word, d: usize) -> Result<Word> {
    if d < 2 {
        return Err(Error::invalid(format!("run bound d = {d} must be at least 2")));
    }
    let alphabet = x.alphabet();
    let s = x.symbols();
    let len = s.len();
    let t = break_runs_inserts(len, d);
    let comp = |pos: usize| alphabet.complement(s[pos - 1]);
    // (gap, order, symbol); gap g means "after original position g"
    let mut inserts = Vec::with_capacity(2 * t + 1);
    inserts.push((len / 2, 0, comp((len / 2).max(1))));
    for i in 1..=t {
        let q = i * (d - 1) + 1;
        inserts.push((q - 1, 1, comp(q)));
        let p = len - i * (d - 1);
        inserts.push((p, 2, comp(p)));
    }
    inserts.sort_by_key(|&(gap, order, _)| (gap, order));
    let mut out = Vec::with_capacity(len + inserts.len());
    let mut next = inserts.iter().peekable();
    for g in 0..=len {
        if g > 0 {
            out.push(s[g - 1]);
        }
        while let Some(&(_, _, sym)) = next.next_if(|ins| ins.0 == g) {
            out.push(sym);
        }
    }
    Word::new(alphabet, out)
}

/// `X ⊗ Y`: `x` inserted between the two halves of `y`.
pub fn wrap(x: &Word, y: &Word) -> Result<Word> {
    if !y.len().is_multiple_of(2) {
        return Err(Error::invalid(format!("wrap needs an even-length outer word, got {}", y.len())));
    }
    if x.alphabet() != y.alphabet() {
        return Err(Error::invalid("wrap needs words over one alphabet"));
    }
    let (head, tail) = y.symbols().split_at(y.len() / 2);
    let mut out = Vec::with_capacity(x.len() + y.len());
    out.extend_from_slice(head);
    out.extend_from_slice(x.symbols());
    out.extend_from_slice(tail);
    Word::new(x.alphabet(), out)
}

/// Quantities the free-energy path derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyDerived {
    /// `D = Γ_max − Γ_min`.
    pub d: u64,
    pub gamma_max: u64,
    pub w_max: u64,
    pub w_min: u64,
    /// Whether the padding branch ran.
    pub padded: bool,
    /// Pad length `2ℓ`; zero when no padding was needed.
    pub m: usize,
    /// Smallest achievable energy at length `m`.
    pub e_min: u64,
    /// Largest gap between consecutive achievable energies at length `m`.
    pub delta: u64,
    pub alpha: u64,
    pub beta: u64,
    /// `4D + Γ_max`.
    pub sigma: u64,
    /// Modulus of the counting ring, `None` for exact counts.
    pub modulus: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct GenResult {
    pub problem: Problem,
    pub words: WordSet,
    /// The `ℓ` of the length formula.
    pub ell_base: usize,
    pub final_length: usize,
    pub k: usize,
    pub energy: Option<EnergyDerived>,
    /// Instrumented work: symbols written plus counting and extraction ops.
    pub ops: u64,
}

impl GenResult {
    /// `params` with `σ` filled in from the energy path, ready for
    /// [`verify_all`](crate::verify::verify_all).
    pub fn verify_params(&self, params: &ConstraintParams) -> ConstraintParams {
        let mut p = *params;
        if let Some(e) = &self.energy {
            p.sigma = e.sigma;
        }
        p
    }
}

#[derive(Clone, Debug)]
pub struct GenRequest {
    pub problem: Problem,
    pub n: usize,
    pub params: ConstraintParams,
    pub seed: u64,
    /// Required for [`Problem::Energy`].
    pub table: Option<GammaTable>,
    pub fork: ForkPolicy,
}

impl GenRequest {
    pub fn new(problem: Problem, n: usize, params: ConstraintParams, seed: u64) -> Self {
        GenRequest { problem, n, params, seed, table: None, fork: ForkPolicy::default() }
    }

    pub fn with_table(mut self, table: GammaTable) -> Self {
        self.table = Some(table);
        self
    }
}

/// Runs the generator `req.problem` selects.
pub fn generate(req: &GenRequest) -> Result<GenResult> {
    match req.problem {
        Problem::Basic => fast_dwd_basic(req.n, &req.params, req.seed),
        Problem::Gc => fast_dwd_gc(req.n, &req.params, req.seed),
        Problem::Runs => fast_dwd_runs(req.n, &req.params, req.seed),
        Problem::Energy => {
            let table = req.table.as_ref().ok_or_else(|| Error::invalid("the energy problem needs a gamma table"))?;
            fast_dwd_free_energy_with(req.n, &req.params, table, req.seed, req.fork)
        }
    }
}

/// Seed of retry `attempt`; attempt 0 is the master seed itself.
pub fn derive_seed(master: u64, attempt: u64) -> u64 {
    if attempt == 0 {
        return master;
    }
    // splitmix64 finalizer
    let mut z = master ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(())
}

fn random_words(alphabet: Alphabet, n: usize, len: usize, seed: u64) -> Result<Vec<Word>> {
    (0..n)
        .into_par_iter()
        .map(|i| seeded_word(alphabet, len, StreamSeed::new(seed, i as u64)))
        .collect()
}

/// `FastDWD_{1..6}`: `n` uniform DNA words of length `9·max{k, ⌈log₄ n⌉}`.
pub fn fast_dwd_basic(n: usize, params: &ConstraintParams, seed: u64) -> Result<GenResult> {
    check_n(n)?;
    let k = params.k_max();
    let len = basic_length(n, k);
    let words = WordSet::new(random_words(Alphabet::Dna, n, len, seed)?)?;
    Ok(GenResult {
        problem: Problem::Basic,
        words,
        ell_base: len,
        final_length: len,
        k,
        energy: None,
        ops: (n * len) as u64,
    })
}

/// `FastDWD_{1..7}`: uniform binary words of length `10·max{k, ⌈log₂ n⌉}`
/// mapped to DNA with the first-positions policy.
pub fn fast_dwd_gc(n: usize, params: &ConstraintParams, seed: u64) -> Result<GenResult> {
    check_n(n)?;
    let k = params.k_max();
    let len = gc_length(n, k);
    let gamma = params.gamma;
    let words = random_words(Alphabet::Binary, n, len, seed)?
        .par_iter()
        .map(|w| gc_map(w, gamma, GcPositionPolicy::FirstPositions))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenResult {
        problem: Problem::Gc,
        words: WordSet::new(words)?,
        ell_base: len,
        final_length: len,
        k,
        energy: None,
        ops: (2 * n * len) as u64,
    })
}

/// `FastDWD_{1,2,3,7,8}`: binary words of length `10·max{k1,k2,k3,
/// ⌈log₂ n⌉}`, run-broken, then GC-mapped on the final length.
pub fn fast_dwd_runs(n: usize, params: &ConstraintParams, seed: u64) -> Result<GenResult> {
    check_n(n)?;
    params.validate()?;
    let k = Problem::Runs.k(params);
    let len = gc_length(n, k);
    let final_length = break_runs_length(len, params.d);
    let gamma = params.gamma;
    let words = random_words(Alphabet::Binary, n, len, seed)?
        .par_iter()
        .map(|w| gc_map(&break_runs(w, params.d)?, gamma, GcPositionPolicy::RunPreserving))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenResult {
        problem: Problem::Runs,
        words: WordSet::new(words)?,
        ell_base: len,
        final_length,
        k,
        energy: None,
        ops: (n * (len + 2 * final_length)) as u64,
    })
}

/// `FastDWD_{1..6,9}` with the published fork policy.
pub fn fast_dwd_free_energy(n: usize, params: &ConstraintParams, table: &GammaTable, seed: u64) -> Result<GenResult> {
    fast_dwd_free_energy_with(n, params, table, seed, ForkPolicy::default())
}

/// `FastDWD_{1..6,9}`: basic words, padded when their energies spread by
/// more than `3D` so that all land in a band of width below `4D + Γ_max`.
///
/// Pads have length `2ℓ`; counts are exact up to length 64 and modular
/// beyond.
pub fn fast_dwd_free_energy_with(
    n: usize,
    params: &ConstraintParams,
    table: &GammaTable,
    seed: u64,
    fork: ForkPolicy,
) -> Result<GenResult> {
    let base = fast_dwd_basic(n, params, seed)?;
    let len = base.ell_base;
    let fe: Vec<u64> = base.words.iter().map(|w| free_energy_symbols(w.symbols(), table)).collect();
    let w_max = *fe.iter().max().expect("n >= 1");
    let w_min = *fe.iter().min().expect("n >= 1");
    let d = table.spread();
    let mut derived = EnergyDerived {
        d,
        gamma_max: table.gamma_max(),
        w_max,
        w_min,
        padded: false,
        m: 0,
        e_min: 0,
        delta: 0,
        alpha: 0,
        beta: 0,
        sigma: 4 * d + table.gamma_max(),
        modulus: None,
    };
    let mut ops = base.ops + (n * len) as u64;
    if w_max - w_min <= 3 * d {
        return Ok(GenResult { problem: Problem::Energy, energy: Some(derived), ops, ..base });
    }

    let m = 2 * len;
    let words = if m <= EXACT_RING_MAX_LENGTH {
        pad(&base.words, &fe, build(m, table, ExactRing)?, fork, &mut derived, &mut ops)?
    } else {
        let ring = ModularRing::new(NttPrime::default());
        derived.modulus = Some(ring.modulus());
        pad(&base.words, &fe, build(m, table, ring)?, fork, &mut derived, &mut ops)?
    };
    Ok(GenResult {
        problem: Problem::Energy,
        words: WordSet::new(words)?,
        ell_base: len,
        final_length: 3 * len,
        k: base.k,
        energy: Some(derived),
        ops,
    })
}

fn pad<R: CoeffRing>(
    words: &WordSet,
    fe: &[u64],
    ladder: CountLadder<R>,
    fork: ForkPolicy,
    derived: &mut EnergyDerived,
    ops: &mut u64,
) -> Result<Vec<Word>> {
    let m = ladder.target();
    let profile = ladder.achievable_profile(m)?;
    let alpha = derived.w_max + profile.e_min;
    let beta = alpha + profile.delta;
    derived.padded = true;
    derived.m = m;
    derived.e_min = profile.e_min;
    derived.delta = profile.delta;
    derived.alpha = alpha;
    derived.beta = beta;
    let ranges = fe.iter().map(|&e| (alpha - e, beta - e)).collect();
    let pads = construct_strings(&EnergyBounds { length: m, ranges }, &ladder, fork)?;
    *ops += ladder.build_ops() + pads.ops + (words.len() * 3 * words.word_len()) as u64;
    words.iter().zip(&pads.words).map(|(s, p)| wrap(s, p)).collect()
}
