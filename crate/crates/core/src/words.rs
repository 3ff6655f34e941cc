//! Digit words over tuple alphabets.
//!
//! A set S of d-tuples of naturals is represented positionally: each tuple is
//! written in base k, the d expansions are padded with leading zeros to a
//! common length, and the result is read as a single word over the alphabet
//! Sigma_k^d of digit tuples. The canonical expansion uses the minimal common
//! length, so at least one coordinate has a nonzero leading digit and the zero
//! tuple is the empty word. Words are stored most significant digit first;
//! automata that consume digits least significant first reverse the word at
//! the membership boundary instead.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Reading order of an automaton's input words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Most significant digit first (the canonical order in this crate).
    Msd,
    /// Least significant digit first.
    Lsd,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Msd => write!(f, "msd"),
            Direction::Lsd => write!(f, "lsd"),
        }
    }
}

/// Upper bound on k^d; transition tables are dense in the symbol index.
pub(crate) const MAX_ALPHABET: usize = 1 << 20;

/// Size of the tuple alphabet Sigma_k^d, or an error if it would not fit a
/// dense table.
pub(crate) fn alphabet_size(base: u32, dim: usize) -> Result<usize> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!("base {base} < 2")));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension 0".into()));
    }
    let mut size: usize = 1;
    for _ in 0..dim {
        size = size
            .checked_mul(base as usize)
            .filter(|&s| s <= MAX_ALPHABET)
            .ok_or(Error::AlphabetTooLarge { base, dim })?;
    }
    Ok(size)
}

/// Dense index of a digit tuple, coordinate 1 most significant.
pub(crate) fn symbol_index(base: u32, digits: &[u32]) -> usize {
    let mut idx = 0usize;
    for &d in digits {
        idx = idx * base as usize + d as usize;
    }
    idx
}

/// Inverse of [`symbol_index`].
pub(crate) fn symbol_digits(base: u32, dim: usize, mut idx: usize) -> Vec<u32> {
    let mut digits = vec![0u32; dim];
    for c in (0..dim).rev() {
        digits[c] = (idx % base as usize) as u32;
        idx /= base as usize;
    }
    digits
}

/// Sum of the digits in a tuple symbol (used by the counting DP).
pub(crate) fn symbol_digit_sum(base: u32, dim: usize, idx: usize) -> u32 {
    symbol_digits(base, dim, idx).iter().sum()
}

/// A finite word of base-k digit tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitWord {
    base: u32,
    dim: usize,
    // one entry per position, each of length dim
    symbols: Vec<Vec<u32>>,
}

impl DigitWord {
    /// Builds a word from explicit digit tuples, validating digit ranges.
    pub fn new(base: u32, dim: usize, symbols: Vec<Vec<u32>>) -> Result<Self> {
        alphabet_size(base, dim)?;
        for sym in &symbols {
            if sym.len() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: sym.len(),
                });
            }
            for &d in sym {
                if d >= base {
                    return Err(Error::DigitOutOfRange { digit: d, base });
                }
            }
        }
        Ok(DigitWord { base, dim, symbols })
    }

    /// The empty word.
    pub fn empty(base: u32, dim: usize) -> Result<Self> {
        DigitWord::new(base, dim, Vec::new())
    }

    /// Builds a word from one decimal digit string per coordinate, all of the
    /// same length, e.g. `("2110", "0020")` in base 3.
    pub fn from_coordinate_strings(base: u32, coords: &[&str]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("dimension 0".into()));
        }
        let len = coords[0].chars().count();
        if coords.iter().any(|c| c.chars().count() != len) {
            return Err(Error::InvalidParameter(
                "coordinate strings differ in length".into(),
            ));
        }
        let dim = coords.len();
        let mut symbols = vec![vec![0u32; dim]; len];
        for (c, s) in coords.iter().enumerate() {
            for (j, ch) in s.chars().enumerate() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad digit char {ch:?}")))?;
                symbols[j][c] = d;
            }
        }
        DigitWord::new(base, dim, symbols)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Vec<u32>] {
        &self.symbols
    }

    /// Dense symbol index at position `i`.
    pub(crate) fn symbol_index_at(&self, i: usize) -> usize {
        symbol_index(self.base, &self.symbols[i])
    }

    /// True when the word is a canonical expansion: empty, or the first
    /// symbol has a nonzero digit in some coordinate.
    pub fn is_canonical(&self) -> bool {
        match self.symbols.first() {
            None => true,
            Some(sym) => sym.iter().any(|&d| d != 0),
        }
    }

    /// Keeps only the 1-based `coords` of every symbol, in the order given.
    pub fn project(&self, coords: &[usize]) -> Result<DigitWord> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate set".into()));
        }
        if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > self.dim) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {c} out of range 1..={}",
                self.dim
            )));
        }
        let symbols = self
            .symbols
            .iter()
            .map(|sym| coords.iter().map(|&c| sym[c - 1]).collect())
            .collect();
        Ok(DigitWord {
            base: self.base,
            dim: coords.len(),
            symbols,
        })
    }

    /// The same word with the symbol order reversed.
    pub fn reversed(&self) -> DigitWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        DigitWord {
            base: self.base,
            dim: self.dim,
            symbols,
        }
    }

    /// Concatenation; both words must share base and dimension.
    pub fn concat(&self, other: &DigitWord) -> Result<DigitWord> {
        if self.base != other.base {
            return Err(Error::BaseMismatch {
                left: self.base,
                right: other.base,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(DigitWord {
            base: self.base,
            dim: self.dim,
            symbols,
        })
    }

    /// The tuple of naturals this word denotes, most significant digit first.
    pub fn evaluate(&self) -> Vec<BigUint> {
        let k = BigUint::from(self.base);
        let mut values = vec![BigUint::zero(); self.dim];
        for sym in &self.symbols {
            for (c, &d) in sym.iter().enumerate() {
                values[c] = &values[c] * &k + BigUint::from(d);
            }
        }
        values
    }
}

/// Canonical base-k expansion of a tuple of naturals.
///
/// Coordinates are padded with leading zeros to the length of the longest
/// one; the all-zero tuple expands to the empty word.
pub fn expand(tuple: &[BigUint], base: u32) -> Result<DigitWord> {
    alphabet_size(base, tuple.len().max(1))?;
    if tuple.is_empty() {
        return Err(Error::InvalidParameter("dimension 0".into()));
    }
    let k = BigUint::from(base);
    // digits per coordinate, least significant first
    let mut digits: Vec<Vec<u32>> = Vec::with_capacity(tuple.len());
    for v in tuple {
        let mut ds = Vec::new();
        let mut rest = v.clone();
        while !rest.is_zero() {
            let q = &rest / &k;
            let r = &rest - &q * &k;
            ds.push(u32::try_from(r).expect("remainder below base"));
            rest = q;
        }
        digits.push(ds);
    }
    let len = digits.iter().map(Vec::len).max().unwrap_or(0);
    let mut symbols = vec![vec![0u32; tuple.len()]; len];
    for (c, ds) in digits.iter().enumerate() {
        for (pos, &d) in ds.iter().enumerate() {
            // position pos counts from the least significant end
            symbols[len - 1 - pos][c] = d;
        }
    }
    DigitWord::new(base, tuple.len(), symbols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn evaluates_binary_word() {
        let w = DigitWord::from_coordinate_strings(2, &["1101"]).unwrap();
        assert_eq!(w.evaluate(), vec![nat(13)]);
    }

    #[test]
    fn evaluates_tuple_word_base3() {
        let w = DigitWord::from_coordinate_strings(3, &["2110", "0020"]).unwrap();
        assert_eq!(w.evaluate(), vec![nat(66), nat(6)]);
    }

    #[test]
    fn expands_five_in_binary() {
        let w = expand(&[nat(5)], 2).unwrap();
        assert_eq!(w, DigitWord::from_coordinate_strings(2, &["101"]).unwrap());
        assert!(w.is_canonical());
    }

    #[test]
    fn zero_tuple_expands_to_empty_word() {
        let w = expand(&[nat(0), nat(0)], 5).unwrap();
        assert!(w.is_empty());
        assert!(w.is_canonical());
        assert_eq!(w.evaluate(), vec![nat(0), nat(0)]);
    }

    #[test]
    fn expansion_pads_shorter_coordinates() {
        let w = expand(&[nat(66), nat(6)], 3).unwrap();
        assert_eq!(
            w,
            DigitWord::from_coordinate_strings(3, &["2110", "0020"]).unwrap()
        );
    }

    #[test]
    fn rejects_digit_out_of_range() {
        let err = DigitWord::new(2, 1, vec![vec![2]]).unwrap_err();
        assert_eq!(err, Error::DigitOutOfRange { digit: 2, base: 2 });
    }

    #[test]
    fn round_trips_values() {
        for v in [0u64, 1, 2, 7, 13, 66, 12289, 1_000_000] {
            for base in [2u32, 3, 5, 10] {
                let w = expand(&[nat(v)], base).unwrap();
                assert_eq!(w.evaluate(), vec![nat(v)]);
                assert!(w.is_canonical());
            }
        }
    }

    #[test]
    fn symbol_index_round_trip() {
        let (base, dim) = (3u32, 2usize);
        for idx in 0..alphabet_size(base, dim).unwrap() {
            let digits = symbol_digits(base, dim, idx);
            assert_eq!(symbol_index(base, &digits), idx);
        }
    }

    #[test]
    fn rejects_oversized_alphabet() {
        assert!(matches!(
            alphabet_size(1 << 11, 2),
            Err(Error::AlphabetTooLarge { .. })
        ));
    }
}
