//! Packed bit-vector helpers shared by the Pauli, tableau and CH-form code.
//!
//! Qubit `q` lives in bit `q % 64` of word `q / 64`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn get(words: &[u64], q: usize) -> bool {
    (words[q >> 6] >> (q & 63)) & 1 == 1
}

#[inline]
pub(crate) fn set(words: &mut [u64], q: usize, value: bool) {
    let mask = 1u64 << (q & 63);
    if value {
        words[q >> 6] |= mask;
    } else {
        words[q >> 6] &= !mask;
    }
}

#[inline]
pub(crate) fn flip(words: &mut [u64], q: usize) {
    words[q >> 6] ^= 1u64 << (q & 63);
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Popcount of `a & b`.
#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[inline]
pub(crate) fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> u32 {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones())
        .sum()
}

#[inline]
pub(crate) fn parity_and(a: &[u64], b: &[u64]) -> bool {
    and_count(a, b) & 1 == 1
}

#[inline]
pub(crate) fn is_zero(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

#[inline]
pub(crate) fn count(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

/// Index of the lowest set bit, if any.
pub(crate) fn first_set(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

/// Iterates the indices of the set bits in ascending order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            }
        })
    })
}

/// A computational basis label `x ∈ {0,1}^n`.
///
/// The text form lists qubit 0 first: `"01"` has qubit 1 set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    n: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        BitString {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = BitString::zeros(bits.len());
        for (q, &v) in bits.iter().enumerate() {
            set(&mut b.words, q, v);
        }
        b
    }

    /// Basis label of statevector index `index` (qubit `q` is bit `q`).
    pub fn from_index(n: usize, index: u64) -> Self {
        let mut b = BitString::zeros(n);
        if n > 0 {
            b.words[0] = if n >= 64 {
                index
            } else {
                index & ((1u64 << n) - 1)
            };
        }
        b
    }

    /// Statevector index; only meaningful for `n <= 64`.
    pub fn to_index(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, q: usize) -> bool {
        get(&self.words, q)
    }

    pub fn set(&mut self, q: usize, value: bool) {
        set(&mut self.words, q, value)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(n));
        BitString { n, words }
    }

    /// Parses a bitstring and checks its length.
    pub fn parse_with_len(s: &str, n: usize) -> Result<Self> {
        let b: BitString = s.parse()?;
        if b.n != n {
            return Err(Error::DimensionMismatch { left: b.n, right: n });
        }
        Ok(b)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut b = BitString::zeros(s.len());
        for (q, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(q, true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bitstring may only contain 0 and 1, found {c:?}"
                    )))
                }
            }
        }
        Ok(b)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}
