//! Naive verifiers for constraints C1 through C9.
//!
//! These are the trusted oracles for the generators: every pair and every
//! alignment is checked directly. Quantifier domains:
//!
//! * C1 over unordered pairs of distinct indices;
//! * C2, C4, C5 over ordered pairs of distinct indices;
//! * C3, C6 per word.
//!
//! The shifting constraints C4 to C6 range over `i = 1..=l`; offsets whose
//! threshold `k - (l - i)` is not positive hold trivially and are skipped.
//! Offenders are reported in lexicographic index order whatever the thread
//! count.

mod packed;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{free_energy_symbols, GammaTable};
use crate::words::{Alphabet, WordSet};
use crate::{Error, Result};

use packed::{shifted_hamming, Packed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl ConstraintId {
    pub const ALL: [ConstraintId; 9] = [
        ConstraintId::C1,
        ConstraintId::C2,
        ConstraintId::C3,
        ConstraintId::C4,
        ConstraintId::C5,
        ConstraintId::C6,
        ConstraintId::C7,
        ConstraintId::C8,
        ConstraintId::C9,
    ];

    /// The six Hamming-family constraints.
    pub const HAMMING: [ConstraintId; 6] = [
        ConstraintId::C1,
        ConstraintId::C2,
        ConstraintId::C3,
        ConstraintId::C4,
        ConstraintId::C5,
        ConstraintId::C6,
    ];
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An exact GC fraction `num / den` in `[0, 1]`.
///
/// Kept rational so `⌈γ·l⌉` is computed without floating-point rounding
/// (`0.3 * 10` is not `3.0` in binary floating point).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GcFraction {
    num: u64,
    den: u64,
}

impl GcFraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::invalid(format!("GC fraction {num}/{den} outside [0, 1]")));
        }
        Ok(GcFraction { num, den })
    }

    pub fn half() -> Self {
        GcFraction { num: 1, den: 2 }
    }

    /// `⌈γ·len⌉`.
    pub fn gc_target(self, len: usize) -> usize {
        ((self.num as u128 * len as u128).div_ceil(self.den as u128)) as usize
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for GcFraction {
    fn default() -> Self {
        GcFraction::half()
    }
}

impl FromStr for GcFraction {
    type Err = Error;

    /// Accepts `p/q` or a decimal such as `0.45`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse GC fraction {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return GcFraction::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(bad)?;
        GcFraction::new(num, den)
    }
}

impl fmt::Display for GcFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Thresholds for C1..C9.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintParams {
    /// `k1..k6`, the Hamming-family thresholds.
    pub k: [usize; 6],
    pub gamma: GcFraction,
    /// Maximum run length, at least 2.
    pub d: usize,
    /// Free-energy spread bound.
    pub sigma: u64,
}

impl ConstraintParams {
    /// All six Hamming thresholds set to `k`.
    pub fn uniform(k: usize) -> Self {
        ConstraintParams { k: [k; 6], gamma: GcFraction::half(), d: 2, sigma: 0 }
    }

    pub fn k_max(&self) -> usize {
        self.k.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid(format!("run bound d = {} must be at least 2", self.d)));
        }
        Ok(())
    }
}

impl Default for ConstraintParams {
    fn default() -> Self {
        ConstraintParams::uniform(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Word(usize),
    Pair(usize, usize),
}

/// Which end of the word a shifting reverse-complement check aligned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Prefix,
    Suffix,
}

/// One failing instance. Indices are 0-based here; text and JSON output
/// print them 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offender {
    pub subject: Subject,
    /// The `i` of shifting constraints, or the 1-based run start for C8.
    pub offset: Option<usize>,
    pub side: Option<Side>,
    pub observed: i64,
    pub required: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub constraint: ConstraintId,
    pub offenders: Vec<Offender>,
}

impl ViolationReport {
    pub fn holds(&self) -> bool {
        self.offenders.is_empty()
    }

    /// One line per offender:
    /// `CONSTRAINT C2 VIOLATION pair=(3,7) i=12 observed=4 required=6`.
    /// Shifting reverse-complement offenders also carry `side=prefix` or
    /// `side=suffix`.
    pub fn lines(&self) -> Vec<String> {
        self.offenders
            .iter()
            .map(|o| {
                let mut line = format!("CONSTRAINT {} VIOLATION ", self.constraint);
                match o.subject {
                    Subject::Word(i) => line.push_str(&format!("word={}", i + 1)),
                    Subject::Pair(a, b) => line.push_str(&format!("pair=({},{})", a + 1, b + 1)),
                }
                if let Some(i) = o.offset {
                    line.push_str(&format!(" i={i}"));
                }
                match o.side {
                    Some(Side::Prefix) => line.push_str(" side=prefix"),
                    Some(Side::Suffix) => line.push_str(" side=suffix"),
                    None => {}
                }
                line.push_str(&format!(" observed={} required={}", o.observed, o.required));
                line
            })
            .collect()
    }

    /// JSON form with 1-based indices.
    pub fn to_json(&self) -> serde_json::Value {
        let offenders: Vec<_> = self
            .offenders
            .iter()
            .map(|o| {
                let subject = match o.subject {
                    Subject::Word(i) => serde_json::json!({ "word": i + 1 }),
                    Subject::Pair(a, b) => serde_json::json!({ "pair": [a + 1, b + 1] }),
                };
                serde_json::json!({
                    "subject": subject,
                    "i": o.offset,
                    "side": o.side,
                    "observed": o.observed,
                    "required": o.required,
                })
            })
            .collect();
        serde_json::json!({ "constraint": self.constraint, "holds": self.holds(), "offenders": offenders })
    }
}

fn report(constraint: ConstraintId, offenders: Vec<Offender>) -> ViolationReport {
    ViolationReport { constraint, offenders }
}

fn pair(a: usize, b: usize, offset: Option<usize>, side: Option<Side>, observed: usize, required: i64) -> Offender {
    Offender { subject: Subject::Pair(a, b), offset, side, observed: observed as i64, required }
}

fn single(a: usize, offset: Option<usize>, side: Option<Side>, observed: usize, required: i64) -> Offender {
    Offender { subject: Subject::Word(a), offset, side, observed: observed as i64, required }
}

struct Prepared {
    words: Vec<Packed>,
    rcs: Vec<Packed>,
    len: usize,
}

impl Prepared {
    fn new(ws: &WordSet) -> Self {
        Prepared {
            words: ws.iter().map(|w| Packed::new(w.symbols())).collect(),
            rcs: ws.iter().map(|w| Packed::new(w.reverse_complement().symbols())).collect(),
            len: ws.word_len(),
        }
    }

    /// Shifts `s = l - i` whose threshold `k - s` is positive.
    fn shifts(&self, k: usize) -> std::ops::Range<usize> {
        0..k.min(self.len)
    }
}

/// Runs `f(y)` for every index and concatenates the results in index order.
fn per_index<F>(n: usize, f: F) -> Vec<Offender>
where
    F: Fn(usize) -> Vec<Offender> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().collect()
}

fn basic_hamming(p: &Prepared, k1: usize) -> ViolationReport {
    let n = p.words.len();
    let offenders = per_index(n, |a| {
        ((a + 1)..n)
            .filter_map(|b| {
                let h = shifted_hamming(&p.words[a], &p.words[b], 0);
                (h < k1).then(|| pair(a, b, None, None, h, k1 as i64))
            })
            .collect()
    });
    report(ConstraintId::C1, offenders)
}

fn rc_hamming(p: &Prepared, k2: usize, include_diagonal: bool) -> ViolationReport {
    let n = p.words.len();
    let offenders = per_index(n, |y| {
        (0..n)
            .filter(|&x| include_diagonal || x != y)
            .filter_map(|x| {
                let h = shifted_hamming(&p.words[y], &p.rcs[x], 0);
                (h < k2).then(|| pair(y, x, None, None, h, k2 as i64))
            })
            .collect()
    });
    report(ConstraintId::C2, offenders)
}

fn self_complementary(p: &Prepared, k3: usize) -> ViolationReport {
    let offenders = per_index(p.words.len(), |y| {
        let h = shifted_hamming(&p.words[y], &p.rcs[y], 0);
        if h < k3 {
            vec![single(y, None, None, h, k3 as i64)]
        } else {
            Vec::new()
        }
    });
    report(ConstraintId::C3, offenders)
}

fn shifting_hamming(p: &Prepared, k4: usize) -> ViolationReport {
    let n = p.words.len();
    let l = p.len;
    let offenders = per_index(n, |y| {
        let mut out = Vec::new();
        for x in (0..n).filter(|&x| x != y) {
            // i ascending means shift descending
            for s in p.shifts(k4).rev() {
                let h = shifted_hamming(&p.words[y], &p.words[x], s);
                let required = (k4 - s) as i64;
                if (h as i64) < required {
                    out.push(pair(y, x, Some(l - s), None, h, required));
                }
            }
        }
        out
    });
    report(ConstraintId::C4, offenders)
}

/// Both reverse-complement alignment families of C5/C6 for the pair `(y, x)`.
fn shifting_rc_pair(p: &Prepared, y: usize, x: usize, k: usize, out: &mut Vec<Offender>, as_pair: bool) {
    let l = p.len;
    for s in p.shifts(k).rev() {
        let required = (k - s) as i64;
        // H(Y[1..i], X[1..i]^RC): X[1..i]^RC is the suffix of X^RC
        let h_pre = shifted_hamming(&p.words[y], &p.rcs[x], s);
        // H(Y[s+1..l], X[s+1..l]^RC): X[s+1..l]^RC is the prefix of X^RC
        let h_suf = shifted_hamming(&p.rcs[x], &p.words[y], s);
        for (h, side) in [(h_pre, Side::Prefix), (h_suf, Side::Suffix)] {
            if (h as i64) < required {
                out.push(if as_pair {
                    pair(y, x, Some(l - s), Some(side), h, required)
                } else {
                    single(y, Some(l - s), Some(side), h, required)
                });
            }
        }
    }
}

fn shifting_rc(p: &Prepared, k5: usize) -> ViolationReport {
    let n = p.words.len();
    let offenders = per_index(n, |y| {
        let mut out = Vec::new();
        for x in (0..n).filter(|&x| x != y) {
            shifting_rc_pair(p, y, x, k5, &mut out, true);
        }
        out
    });
    report(ConstraintId::C5, offenders)
}

fn shifting_self(p: &Prepared, k6: usize) -> ViolationReport {
    let offenders = per_index(p.words.len(), |y| {
        let mut out = Vec::new();
        shifting_rc_pair(p, y, y, k6, &mut out, false);
        out
    });
    report(ConstraintId::C6, offenders)
}

/// C1: every unordered pair of distinct members has `H(X, Y) >= k1`.
pub fn verify_basic_hamming(ws: &WordSet, k1: usize) -> ViolationReport {
    basic_hamming(&Prepared::new(ws), k1)
}

/// C2: every ordered pair of distinct members has `H(Y, X^RC) >= k2`.
pub fn verify_rc_hamming(ws: &WordSet, k2: usize) -> ViolationReport {
    rc_hamming(&Prepared::new(ws), k2, false)
}

/// C2 with the diagonal `Y = X` included (which then also covers C3).
pub fn verify_rc_hamming_with_diagonal(ws: &WordSet, k2: usize) -> ViolationReport {
    rc_hamming(&Prepared::new(ws), k2, true)
}

/// C3: every member has `H(Y, Y^RC) >= k3`.
pub fn verify_self_complementary(ws: &WordSet, k3: usize) -> ViolationReport {
    self_complementary(&Prepared::new(ws), k3)
}

/// C4: `H(Y[1..i], X[(l-i+1)..l]) >= k4 - (l - i)` for ordered distinct pairs.
pub fn verify_shifting_hamming(ws: &WordSet, k4: usize) -> ViolationReport {
    shifting_hamming(&Prepared::new(ws), k4)
}

/// C5: both prefix and suffix reverse-complement alignments, ordered pairs.
pub fn verify_shifting_rc(ws: &WordSet, k5: usize) -> ViolationReport {
    shifting_rc(&Prepared::new(ws), k5)
}

/// C6: the C5 alignments of each word against itself.
pub fn verify_shifting_self(ws: &WordSet, k6: usize) -> ViolationReport {
    shifting_self(&Prepared::new(ws), k6)
}

/// C7: every member has exactly `⌈γ·l⌉` characters in `{G, C}`.
pub fn verify_gc_content(ws: &WordSet, gamma: GcFraction) -> Result<ViolationReport> {
    if ws.alphabet() != Alphabet::Dna {
        return Err(Error::invalid("GC content is defined on DNA words only"));
    }
    let target = gamma.gc_target(ws.word_len());
    let offenders = ws
        .iter()
        .enumerate()
        .filter_map(|(i, w)| {
            let gc = w.gc_count();
            (gc != target).then(|| single(i, None, None, gc, target as i64))
        })
        .collect();
    Ok(report(ConstraintId::C7, offenders))
}

/// C8: no run of one character longer than `d`. Each long run is reported
/// with its 1-based start offset.
pub fn verify_runs(ws: &WordSet, d: usize) -> Result<ViolationReport> {
    if d < 2 {
        return Err(Error::invalid(format!("run bound d = {d} must be at least 2")));
    }
    let mut offenders = Vec::new();
    for (i, w) in ws.iter().enumerate() {
        let s = w.symbols();
        let mut start = 0;
        for p in 1..=s.len() {
            if p == s.len() || s[p] != s[start] {
                let run = p - start;
                if run > d {
                    offenders.push(single(i, Some(start + 1), None, run, d as i64));
                }
                start = p;
            }
        }
    }
    Ok(report(ConstraintId::C8, offenders))
}

/// C9: `max FE - min FE <= sigma`. A violation names `(argmax, argmin)`.
pub fn verify_free_energy(ws: &WordSet, sigma: u64, table: &GammaTable) -> Result<ViolationReport> {
    if ws.alphabet() != Alphabet::Dna {
        return Err(Error::invalid("free energy is defined on DNA words only"));
    }
    if ws.word_len() < 2 {
        return Err(Error::invalid("free energy needs words of length at least 2"));
    }
    let energies: Vec<u64> = ws.iter().map(|w| free_energy_symbols(w.symbols(), table)).collect();
    let (mut arg_max, mut arg_min) = (0, 0);
    for (i, &e) in energies.iter().enumerate() {
        if e > energies[arg_max] {
            arg_max = i;
        }
        if e < energies[arg_min] {
            arg_min = i;
        }
    }
    let spread = energies[arg_max] - energies[arg_min];
    let offenders = if spread > sigma {
        vec![Offender {
            subject: Subject::Pair(arg_max, arg_min),
            offset: None,
            side: None,
            observed: spread as i64,
            required: sigma as i64,
        }]
    } else {
        Vec::new()
    };
    Ok(report(ConstraintId::C9, offenders))
}

/// Options for [`verify_all_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Also check `Y = X` in C2.
    pub include_rc_diagonal: bool,
}

/// Runs every selected verifier, returning one report per constraint in
/// `C1..C9` order.
pub fn verify_all(
    ws: &WordSet,
    params: &ConstraintParams,
    table: Option<&GammaTable>,
    selection: &BTreeSet<ConstraintId>,
) -> Result<Vec<ViolationReport>> {
    verify_all_with(ws, params, table, selection, VerifyOptions::default())
}

pub fn verify_all_with(
    ws: &WordSet,
    params: &ConstraintParams,
    table: Option<&GammaTable>,
    selection: &BTreeSet<ConstraintId>,
    options: VerifyOptions,
) -> Result<Vec<ViolationReport>> {
    if selection.is_empty() {
        return Err(Error::invalid("no constraints selected"));
    }
    let needs_packing = selection.iter().any(|c| ConstraintId::HAMMING.contains(c));
    let prepared = needs_packing.then(|| Prepared::new(ws));
    let p = || prepared.as_ref().expect("packed words prepared");
    let k = params.k;
    selection
        .iter()
        .map(|c| {
            Ok(match c {
                ConstraintId::C1 => basic_hamming(p(), k[0]),
                ConstraintId::C2 => rc_hamming(p(), k[1], options.include_rc_diagonal),
                ConstraintId::C3 => self_complementary(p(), k[2]),
                ConstraintId::C4 => shifting_hamming(p(), k[3]),
                ConstraintId::C5 => shifting_rc(p(), k[4]),
                ConstraintId::C6 => shifting_self(p(), k[5]),
                ConstraintId::C7 => verify_gc_content(ws, params.gamma)?,
                ConstraintId::C8 => verify_runs(ws, params.d)?,
                ConstraintId::C9 => {
                    let table = table.ok_or_else(|| Error::invalid("C9 needs a gamma table"))?;
                    verify_free_energy(ws, params.sigma, table)?
                }
            })
        })
        .collect()
}

pub fn all_hold(reports: &[ViolationReport]) -> bool {
    reports.iter().all(ViolationReport::holds)
}
