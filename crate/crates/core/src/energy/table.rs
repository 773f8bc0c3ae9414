use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::words::{Alphabet, Word, DNA_CHARS};
use crate::{Error, Result};

/// Pairwise free-energy table `Γ[left][right]` over `A, C, G, T`.
///
/// Entries are nonnegative integers; physical energies must be scaled and
/// rounded before use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaTable {
    entries: [[u32; 4]; 4],
}

impl GammaTable {
    pub fn new(entries: [[u32; 4]; 4]) -> Self {
        GammaTable { entries }
    }

    /// Every entry equal to `value`; every word of length `l` then has energy
    /// `(l - 1) * value`.
    pub fn uniform(value: u32) -> Self {
        GammaTable { entries: [[value; 4]; 4] }
    }

    /// A synthetic example table. Not measured data: the values only loosely
    /// echo the ordering of nearest-neighbour stacking energies.
    pub fn synthetic_example() -> Self {
        GammaTable::new([
            [5, 7, 6, 4],
            [8, 11, 12, 7],
            [7, 10, 11, 6],
            [3, 7, 8, 5],
        ])
    }

    pub fn entries(&self) -> &[[u32; 4]; 4] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, left: u8, right: u8) -> u64 {
        self.entries[left as usize][right as usize] as u64
    }

    pub fn gamma_max(&self) -> u64 {
        self.entries.iter().flatten().copied().max().unwrap_or(0) as u64
    }

    pub fn gamma_min(&self) -> u64 {
        self.entries.iter().flatten().copied().min().unwrap_or(0) as u64
    }

    /// `D = Γ_max - Γ_min`.
    pub fn spread(&self) -> u64 {
        self.gamma_max() - self.gamma_min()
    }
}

impl FromStr for GammaTable {
    type Err = Error;

    /// Sixteen whitespace-separated integers in row-major `A, C, G, T`
    /// order; lines starting with `#` are comments.
    fn from_str(text: &str) -> Result<Self> {
        let mut values = Vec::with_capacity(16);
        for (lineno, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            for tok in line.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("{tok:?} is not a nonnegative integer"),
                })?;
                values.push(v);
            }
        }
        if values.len() != 16 {
            return Err(Error::invalid(format!(
                "gamma table needs exactly 16 entries, found {}",
                values.len()
            )));
        }
        let mut entries = [[0u32; 4]; 4];
        for (i, v) in values.into_iter().enumerate() {
            entries[i / 4][i % 4] = v;
        }
        Ok(GammaTable { entries })
    }
}

impl fmt::Display for GammaTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# rows/columns: {}", DNA_CHARS.iter().collect::<String>())?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Sum of `Γ` over the adjacent pairs of `symbols` (DNA codes).
#[inline]
pub fn free_energy_symbols(symbols: &[u8], table: &GammaTable) -> u64 {
    symbols.windows(2).map(|p| table.get(p[0], p[1])).sum()
}

/// Free energy of a DNA word: `Σ_{i=1}^{l-1} Γ[x_i][x_{i+1}]`.
pub fn free_energy(word: &Word, table: &GammaTable) -> Result<u64> {
    if word.alphabet() != Alphabet::Dna {
        return Err(Error::invalid("free energy is defined on DNA words only"));
    }
    if word.len() < 2 {
        return Err(Error::invalid("free energy needs a word of length at least 2"));
    }
    Ok(free_energy_symbols(word.symbols(), table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_heavy() -> GammaTable {
        let mut e = [[1; 4]; 4];
        e[0][0] = 5;
        GammaTable::new(e)
    }

    #[test]
    fn free_energy_examples() {
        let uniform = GammaTable::uniform(1);
        assert_eq!(free_energy(&Word::dna("ACGT").unwrap(), &uniform).unwrap(), 3);
        assert_eq!(free_energy(&Word::dna("AAA").unwrap(), &a_heavy()).unwrap(), 10);
        assert_eq!(free_energy(&Word::dna("ACA").unwrap(), &a_heavy()).unwrap(), 2);
        assert!(free_energy(&Word::dna("A").unwrap(), &uniform).is_err());
        assert!(free_energy(&Word::binary("01").unwrap(), &uniform).is_err());
    }

    #[test]
    fn derived_extremes() {
        let t = a_heavy();
        assert_eq!((t.gamma_max(), t.gamma_min(), t.spread()), (5, 1, 4));
        assert_eq!(GammaTable::uniform(3).spread(), 0);
    }

    #[test]
    fn parse_and_print() {
        let t = GammaTable::synthetic_example();
        let back: GammaTable = t.to_string().parse().unwrap();
        assert_eq!(back, t);
        let flat: GammaTable = "# c\n1 2 3 4 5 6 7 8\n9 10 11 12\n13 14 15 16".parse().unwrap();
        assert_eq!(flat.get(3, 3), 16);
        assert_eq!(flat.get(1, 0), 5);
        assert!("1 2 3".parse::<GammaTable>().is_err());
        assert!("1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 -1".parse::<GammaTable>().is_err());
    }
}
