//! Whole-matrix pipeline: bit-planes in, compressed stream out, and back.
//!
//! A [`QuantizedMatrix`] holds `n_q` bit-planes of an `m x n` weight matrix
//! together with its prune mask. Each plane is flattened row-major and cut
//! into `n_out`-bit [`MaskedWord`]s whose care bits are the kept weights.
//! Words from all planes form one stream (plane 0 first), which is encoded
//! word by word and grouped into blocks that share a patch-count field width.

mod blocks;
mod format;
mod stats;
mod stream;

pub use blocks::{assign_block_widths, count_width, position_width};
pub use format::{
    deserialize, read_qmat, serialize, write_qmat, QMAT_MAGIC, QMAT_VERSION, XQZ_FIXED_HEADER_BITS,
    XQZ_MAGIC,
};
pub use stats::{compression_stats, CompressionStats};
pub use stream::{
    decode_planes, decode_tensor, decode_tensor_with, encode_tensor, encode_tensor_with, Block,
    CompressedTensor, Header, DEFAULT_BLOCK_SIZE,
};

use crate::codec::MaskedWord;
use crate::error::{Error, Result};
use crate::gf2::{check_len, BitVector};

/// An `m x n` matrix of `n_q`-bit quantized weights with a prune mask.
///
/// Plane `i` holds bit `i` of every weight, flattened row-major. Plane bits
/// at pruned positions are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedMatrix {
    m: usize,
    n: usize,
    prune_mask: BitVector,
    planes: Vec<BitVector>,
}

impl QuantizedMatrix {
    pub fn new(m: usize, n: usize, prune_mask: BitVector, planes: Vec<BitVector>) -> Result<Self> {
        let len = m
            .checked_mul(n)
            .ok_or_else(|| Error::config("matrix dimensions overflow"))?;
        check_len("prune mask", len, prune_mask.len())?;
        let planes = planes
            .into_iter()
            .map(|p| {
                check_len("bit-plane", len, p.len())?;
                Ok(&p & &prune_mask)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            m,
            n,
            prune_mask,
            planes,
        })
    }

    /// Builds a matrix from integer levels in row-major order; `None` marks a
    /// pruned weight. Levels must fit in `n_q` bits.
    pub fn from_levels(m: usize, n: usize, n_q: usize, levels: &[Option<u32>]) -> Result<Self> {
        check_len("level list", m * n, levels.len())?;
        if n_q > 32 {
            return Err(Error::config("n_q above 32 is not supported"));
        }
        let mut mask = BitVector::zeros(m * n);
        let mut planes = vec![BitVector::zeros(m * n); n_q];
        for (k, level) in levels.iter().enumerate() {
            let Some(v) = *level else { continue };
            if n_q < 32 && v >> n_q != 0 {
                return Err(Error::config(format!(
                    "level {v} does not fit in {n_q} bits"
                )));
            }
            mask.set(k, true);
            for (i, plane) in planes.iter_mut().enumerate() {
                if (v >> i) & 1 == 1 {
                    plane.set(k, true);
                }
            }
        }
        Self::new(m, n, mask, planes)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.m * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_q(&self) -> usize {
        self.planes.len()
    }

    pub fn prune_mask(&self) -> &BitVector {
        &self.prune_mask
    }

    pub fn planes(&self) -> &[BitVector] {
        &self.planes
    }

    /// Quantized level at `(i, j)`, or `None` if pruned.
    pub fn level(&self, i: usize, j: usize) -> Option<u32> {
        let k = i * self.n + j;
        if !self.prune_mask.get(k) {
            return None;
        }
        Some(
            self.planes
                .iter()
                .enumerate()
                .fold(0, |acc, (b, p)| acc | ((p.get(k) as u32) << b)),
        )
    }

    /// Fraction of pruned weights; 0 for an empty matrix.
    pub fn sparsity(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        1.0 - self.prune_mask.count_ones() as f64 / self.len() as f64
    }

    /// True when both matrices have the same shape and mask and agree on
    /// every kept weight.
    pub fn care_bits_equal(&self, other: &QuantizedMatrix) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.prune_mask == other.prune_mask
            && self.n_q() == other.n_q()
            && self
                .planes
                .iter()
                .zip(&other.planes)
                .all(|(a, b)| a.masked_distance(b, &self.prune_mask) == 0)
    }
}

/// Number of `n_out`-bit words per plane for `len` weights.
pub fn words_per_plane(len: usize, n_out: usize) -> usize {
    len.div_ceil(n_out)
}

/// Cuts every plane into `n_out`-bit words, plane-major. The last word of
/// each plane is padded with don't-care bits.
pub fn slice_words(qm: &QuantizedMatrix, n_out: usize) -> Result<Vec<MaskedWord>> {
    if n_out == 0 {
        return Err(Error::config("n_out must be at least 1"));
    }
    let l = words_per_plane(qm.len(), n_out);
    let mut words = Vec::with_capacity(l * qm.n_q());
    for plane in qm.planes() {
        for j in 0..l {
            let start = j * n_out;
            words.push(MaskedWord::new(
                plane.slice_padded(start, n_out),
                qm.prune_mask().slice_padded(start, n_out),
            )?);
        }
    }
    Ok(words)
}
