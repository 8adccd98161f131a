use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2), packed LSB-first into `u64` words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`. Bits past `len` in
/// the last word are always zero, so equality and popcount can work on whole
/// words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from raw words. Bits past `len` are discarded.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    /// The low `len` bits of `value`, bit 0 first. `len` must be at most 64.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 takes at most 64 bits");
        Self::from_words(len, vec![value])
    }

    /// Inverse of [`BitVector::from_u64`] for vectors of at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_u64 needs at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Number of positions where `self` and `other` differ inside `mask`.
    pub fn masked_distance(&self, other: &BitVector, mask: &BitVector) -> usize {
        debug_assert!(self.len == other.len && self.len == mask.len);
        self.words
            .iter()
            .zip(&other.words)
            .zip(&mask.words)
            .map(|((a, b), m)| ((a ^ b) & m).count_ones() as usize)
            .sum()
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Ascending indices of the set bits.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copy of bits `start..start + len`; positions past the end read as zero.
    pub fn slice_padded(&self, start: usize, len: usize) -> BitVector {
        let mut out = BitVector::zeros(len);
        let end = (start + len).min(self.len);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// `self & !other`, word by word.
    pub fn and_not(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        BitVector {
            len: self.len,
            words,
        }
    }

    pub fn try_xor_assign(&mut self, other: &BitVector) -> Result<()> {
        check_len("bit vector", self.len, other.len)?;
        *self ^= other;
        Ok(())
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd for &BitVector {
    type Output = BitVector;

    fn bitand(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "and of vectors with different lengths");
        let words = self
            .words
            .iter()
            .zip(&rhs.words)
            .map(|(a, b)| a & b)
            .collect();
        BitVector {
            len: self.len,
            words,
        }
    }
}

/// Parses a string of `0`/`1` characters; character `i` becomes bit `i`.
/// Underscores and spaces are ignored.
impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| *c != '_' && !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidConfig(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVector::ones(70);
        assert_eq!(v.count_ones(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        let w = BitVector::from_words(3, vec![u64::MAX]);
        assert_eq!(w.to_u64(), 0b111);
    }

    #[test]
    fn parse_and_display() {
        let v: BitVector = "1011".parse().unwrap();
        assert!(v.get(0) && !v.get(1) && v.get(2) && v.get(3));
        assert_eq!(v.to_string(), "1011");
        assert!("10x1".parse::<BitVector>().is_err());
    }

    #[test]
    fn iter_ones_crosses_words() {
        let mut v = BitVector::zeros(130);
        for i in [0, 63, 64, 129] {
            v.set(i, true);
        }
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
        assert_eq!(BitVector::zeros(5).first_one(), None);
    }

    #[test]
    fn slice_padded_reads_zero_past_end() {
        let v: BitVector = "111".parse().unwrap();
        assert_eq!(v.slice_padded(1, 4).to_string(), "1100");
    }

    #[test]
    fn xor_length_mismatch_is_rejected() {
        let mut a = BitVector::zeros(3);
        assert!(a.try_xor_assign(&BitVector::zeros(4)).is_err());
    }
}
