//! Alphabets, words and word sets.
//!
//! Symbols are stored as small integer codes: `0, 1` for the binary alphabet
//! and `0..4` for `A, C, G, T`. With that order the complement of a code `s`
//! is `size - 1 - s` on both alphabets (`0 <-> 1`, `A <-> T`, `C <-> G`).
//! Positions are 1-based in documentation and reports, 0-based in slices.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    Binary,
    Dna,
}

pub const DNA_CHARS: [char; 4] = ['A', 'C', 'G', 'T'];
const BINARY_CHARS: [char; 2] = ['0', '1'];

impl Alphabet {
    pub fn size(self) -> u8 {
        match self {
            Alphabet::Binary => 2,
            Alphabet::Dna => 4,
        }
    }

    #[inline]
    pub fn complement(self, symbol: u8) -> u8 {
        self.size() - 1 - symbol
    }

    pub fn to_char(self, symbol: u8) -> char {
        match self {
            Alphabet::Binary => BINARY_CHARS[symbol as usize],
            Alphabet::Dna => DNA_CHARS[symbol as usize],
        }
    }

    /// Parses one character, accepting lowercase DNA letters.
    pub fn parse_char(self, c: char) -> Option<u8> {
        match self {
            Alphabet::Binary => match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            },
            Alphabet::Dna => match c.to_ascii_uppercase() {
                'A' => Some(0),
                'C' => Some(1),
                'G' => Some(2),
                'T' => Some(3),
                _ => None,
            },
        }
    }
}

/// A non-empty word over one alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("words must be non-empty"));
        }
        if let Some(bad) = symbols.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::invalid(format!(
                "symbol code {bad} outside the {alphabet:?} alphabet"
            )));
        }
        Ok(Word { alphabet, symbols })
    }

    /// Parses a word over a fixed alphabet.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .map(|c| {
                alphabet
                    .parse_char(c)
                    .ok_or_else(|| Error::invalid(format!("character {c:?} not in {alphabet:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(alphabet, symbols)
    }

    pub fn dna(text: &str) -> Result<Self> {
        Word::parse(Alphabet::Dna, text)
    }

    pub fn binary(text: &str) -> Result<Self> {
        Word::parse(Alphabet::Binary, text)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn reverse(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { alphabet: self.alphabet, symbols }
    }

    pub fn complement(&self) -> Word {
        let a = self.alphabet;
        Word {
            alphabet: a,
            symbols: self.symbols.iter().map(|&s| a.complement(s)).collect(),
        }
    }

    /// `x_l^c x_{l-1}^c ... x_1^c`.
    pub fn reverse_complement(&self) -> Word {
        let a = self.alphabet;
        Word {
            alphabet: a,
            symbols: self.symbols.iter().rev().map(|&s| a.complement(s)).collect(),
        }
    }

    pub fn hamming(&self, other: &Word) -> Result<usize> {
        if self.alphabet != other.alphabet {
            return Err(Error::invalid("hamming distance across alphabets"));
        }
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "hamming distance between lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(hamming_symbols(&self.symbols, &other.symbols))
    }

    /// Number of `G`/`C` characters; zero for binary words.
    pub fn gc_count(&self) -> usize {
        match self.alphabet {
            Alphabet::Binary => 0,
            Alphabet::Dna => self.symbols.iter().filter(|&&s| s == 1 || s == 2).count(),
        }
    }
}

/// Mismatch count of two equal-length symbol slices.
#[inline]
pub fn hamming_symbols(x: &[u8], y: &[u8]) -> usize {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.symbols.iter().map(|&c| self.alphabet.to_char(c)).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Words made only of `0`/`1` are binary, everything else is parsed as DNA.
    fn from_str(s: &str) -> Result<Self> {
        if !s.is_empty() && s.chars().all(|c| c == '0' || c == '1') {
            Word::binary(s)
        } else {
            Word::dna(s)
        }
    }
}

/// Identity of one deterministic pseudorandom substream.
///
/// Substream `stream` of `master` is a ChaCha8 stream keyed by `master` with
/// stream id `stream`, so word `i` of a set is reproducible no matter which
/// thread generates it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamSeed {
    pub master: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(master: u64, stream: u64) -> Self {
        StreamSeed { master, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Draws a uniform word of `length` symbols from substream `seed`.
pub fn seeded_word(alphabet: Alphabet, length: usize, seed: StreamSeed) -> Result<Word> {
    if length == 0 {
        return Err(Error::invalid("word length must be at least 1"));
    }
    let mut rng = seed.rng();
    let bits = match alphabet {
        Alphabet::Binary => 1,
        Alphabet::Dna => 2,
    };
    let per_draw = 64 / bits;
    let mask = (1u64 << bits) - 1;
    let mut symbols = Vec::with_capacity(length);
    while symbols.len() < length {
        let mut chunk = rng.next_u64();
        for _ in 0..per_draw.min(length - symbols.len()) {
            symbols.push((chunk & mask) as u8);
            chunk >>= bits;
        }
    }
    Ok(Word { alphabet, symbols })
}

/// A non-empty list of words sharing one length and one alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSet {
    words: Vec<Word>,
}

impl WordSet {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        let first = words
            .first()
            .ok_or_else(|| Error::invalid("a word set needs at least one word"))?;
        let (len, alphabet) = (first.len(), first.alphabet());
        for (i, w) in words.iter().enumerate() {
            if w.len() != len {
                return Err(Error::invalid(format!(
                    "word {} has length {}, expected {len}",
                    i + 1,
                    w.len()
                )));
            }
            if w.alphabet() != alphabet {
                return Err(Error::invalid(format!("word {} mixes alphabets", i + 1)));
            }
        }
        Ok(WordSet { words })
    }

    /// Convenience constructor from string literals.
    pub fn parse_words<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        WordSet::new(words.iter().map(|w| w.as_ref().parse()).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word_len(&self) -> usize {
        self.words[0].len()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.words[0].alphabet()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.words.iter()
    }

    pub fn into_words(self) -> Vec<Word> {
        self.words
    }
}

impl std::ops::Index<usize> for WordSet {
    type Output = Word;

    fn index(&self, i: usize) -> &Word {
        &self.words[i]
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a Word;
    type IntoIter = std::slice::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// Parses the word-list format: one word per line, blank lines and `#`
/// comments skipped. The alphabet is taken from the first word.
pub fn parse_word_list(text: &str) -> Result<WordSet> {
    let mut words: Vec<Word> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = match words.first() {
            Some(first) => Word::parse(first.alphabet(), line),
            None => line.parse(),
        }
        .map_err(|e| Error::Parse { line: lineno + 1, message: e.to_string() })?;
        words.push(word);
    }
    if words.is_empty() {
        return Err(Error::invalid("word list contains no words"));
    }
    WordSet::new(words)
}

pub fn format_word_list(ws: &WordSet) -> String {
    let mut out = String::with_capacity(ws.len() * (ws.word_len() + 1));
    for w in ws {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

/// FASTA records `>w{i}` (1-based) with the sequence on one line.
pub fn format_fasta(ws: &WordSet) -> String {
    let mut out = String::new();
    for (i, w) in ws.iter().enumerate() {
        out.push_str(&format!(">w{}\n{}\n", i + 1, w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dna(s: &str) -> Word {
        Word::dna(s).unwrap()
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(dna("ACGT").reverse().to_string(), "TGCA");
        assert_eq!(dna("AAAA").reverse().to_string(), "AAAA");
        assert_eq!(Word::binary("01").unwrap().reverse().to_string(), "10");
    }

    #[test]
    fn complement_examples() {
        assert_eq!(dna("ACGT").complement().to_string(), "TGCA");
        assert_eq!(Word::binary("0011").unwrap().complement().to_string(), "1100");
        assert_eq!(dna("GGGG").complement().to_string(), "CCCC");
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(dna("ACGT").reverse_complement().to_string(), "ACGT");
        assert_eq!(dna("TTTT").reverse_complement().to_string(), "AAAA");
        assert_eq!(Word::binary("0011").unwrap().reverse_complement().to_string(), "0011");
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(dna("AAAA").hamming(&dna("AAAA")).unwrap(), 0);
        assert_eq!(dna("ACGT").hamming(&dna("AGGT")).unwrap(), 1);
        assert_eq!(dna("AAA").hamming(&dna("TTT")).unwrap(), 3);
        assert!(dna("AAA").hamming(&dna("AAAA")).is_err());
        assert!(Word::binary("01").unwrap().hamming(&dna("AC")).is_err());
    }

    #[test]
    fn parsing_rules() {
        assert_eq!(dna("acgt").to_string(), "ACGT");
        assert!(Word::dna("ACGN").is_err());
        assert!(Word::dna("").is_err());
        assert_eq!("0110".parse::<Word>().unwrap().alphabet(), Alphabet::Binary);
        assert_eq!("GATTACA".parse::<Word>().unwrap().alphabet(), Alphabet::Dna);
    }

    #[test]
    fn word_list_format() {
        let ws = parse_word_list("# header\nACGT\n\nttaa\n").unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(format_word_list(&ws), "ACGT\nTTAA\n");
        assert_eq!(format_fasta(&ws), ">w1\nACGT\n>w2\nTTAA\n");
        assert!(parse_word_list("").is_err());
        assert!(parse_word_list("# only a comment\n").is_err());
        assert!(parse_word_list("ACGT\nACG\n").is_err());
        match parse_word_list("ACGT\nAC1T\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seeded_words_are_deterministic() {
        let s = StreamSeed::new(42, 3);
        let a = seeded_word(Alphabet::Dna, 9, s).unwrap();
        let b = seeded_word(Alphabet::Dna, 9, s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 9);
        assert!(seeded_word(Alphabet::Dna, 0, s).is_err());
    }

    #[test]
    fn seeded_symbol_frequencies_are_uniform() {
        // 10^5 symbols over 4 categories; chi-square with 3 dof.
        let mut counts = [0u64; 4];
        for i in 0..1000 {
            let w = seeded_word(Alphabet::Dna, 100, StreamSeed::new(7, i)).unwrap();
            for &s in w.symbols() {
                counts[s as usize] += 1;
            }
        }
        let expected = 25_000.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // mean 3, sd sqrt(6); 5 sigma
        assert!(chi2 < 3.0 + 5.0 * 6f64.sqrt(), "chi2 = {chi2}, counts = {counts:?}");
        for &c in &counts {
            // binomial sd of one cell: sqrt(1e5 * 0.25 * 0.75) ~ 137
            assert!((c as f64 - expected).abs() < 5.0 * 137.0);
        }
    }

    fn any_word() -> impl Strategy<Value = Word> {
        (prop_oneof![Just(Alphabet::Binary), Just(Alphabet::Dna)], 1usize..=64)
            .prop_flat_map(|(a, len)| {
                proptest::collection::vec(0..a.size(), len)
                    .prop_map(move |s| Word::new(a, s).unwrap())
            })
    }

    fn word_pair() -> impl Strategy<Value = (Word, Word)> {
        any_word().prop_flat_map(|x| {
            let a = x.alphabet();
            let len = x.len();
            proptest::collection::vec(0..a.size(), len)
                .prop_map(move |s| (x.clone(), Word::new(a, s).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn hamming_is_invariant_under_symmetries((x, y) in word_pair()) {
            let h = x.hamming(&y).unwrap();
            prop_assert_eq!(h, x.reverse().hamming(&y.reverse()).unwrap());
            prop_assert_eq!(h, x.complement().hamming(&y.complement()).unwrap());
            prop_assert_eq!(h, x.reverse_complement().hamming(&y.reverse_complement()).unwrap());
            prop_assert_eq!(h, y.hamming(&x).unwrap());
            prop_assert_eq!(h == 0, x == y);
        }

        #[test]
        fn reverse_complement_is_an_involution(x in any_word()) {
            prop_assert_eq!(x.reverse_complement().reverse_complement(), x.clone());
            prop_assert_eq!(x.reverse_complement(), x.reverse().complement());
            prop_assert_eq!(x.complement().complement(), x);
        }
    }
}
