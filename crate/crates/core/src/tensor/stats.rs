use serde::Serialize;

use super::blocks::{count_width, position_width};
use super::format::XQZ_FIXED_HEADER_BITS;
use super::CompressedTensor;

/// Size breakdown of a compressed tensor.
///
/// The compressed size is `payload_bits + width_field_bits + patch_pos_bits`:
/// one `n_in`-bit seed per word, one count field per word at its block's
/// width, and `ceil(lg n_out)` bits per patch position. Container overhead
/// (fixed header and one width byte per block) is reported separately in
/// `header_bits` and left out of the ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionStats {
    /// `m n n_q`.
    pub uncompressed_bits: u64,
    pub words: u64,
    pub blocks: u64,
    pub payload_bits: u64,
    pub width_field_bits: u64,
    pub patch_pos_bits: u64,
    pub header_bits: u64,
    pub total_patches: u64,
    pub max_patch: u64,
    pub ratio: f64,
    pub bits_per_weight: f64,
    pub memory_reduction: f64,
    /// Single-block count width using `ceil(lg max(p))`, for comparison
    /// with the blocked `ceil(lg(max + 1))` layout actually stored.
    pub unblocked_floor_width_bits: u32,
    /// Single-block count width with `ceil(lg(max + 1))`.
    pub unblocked_width_bits: u32,
}

impl CompressionStats {
    /// Compressed size in bits, excluding container overhead.
    pub fn compressed_bits(&self) -> u64 {
        self.payload_bits + self.width_field_bits + self.patch_pos_bits
    }
}

fn ceil_lg(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        u64::BITS - (x - 1).leading_zeros()
    }
}

pub fn compression_stats(ct: &CompressedTensor) -> CompressionStats {
    let h = &ct.header;
    let uncompressed_bits = (h.m * h.n * h.n_q) as u64;
    let words = ct.words().count() as u64;
    let counts = ct.patch_counts();
    let total_patches: u64 = counts.iter().map(|&p| p as u64).sum();
    let max_patch = counts.iter().copied().max().unwrap_or(0) as u64;

    let payload_bits = words * h.n_in as u64;
    let width_field_bits = ct
        .blocks
        .iter()
        .map(|b| b.words.len() as u64 * b.width_bits as u64)
        .sum();
    let patch_pos_bits = total_patches * position_width(h.n_out) as u64;
    let header_bits = XQZ_FIXED_HEADER_BITS as u64 + 8 * ct.blocks.len() as u64;

    let compressed = payload_bits + width_field_bits + patch_pos_bits;
    let ratio = if compressed == 0 {
        1.0
    } else {
        uncompressed_bits as f64 / compressed as f64
    };
    let weights = (h.m * h.n) as f64;
    CompressionStats {
        uncompressed_bits,
        words,
        blocks: ct.blocks.len() as u64,
        payload_bits,
        width_field_bits,
        patch_pos_bits,
        header_bits,
        total_patches,
        max_patch,
        ratio,
        bits_per_weight: if weights > 0.0 {
            compressed as f64 / weights
        } else {
            0.0
        },
        memory_reduction: 1.0 - 1.0 / ratio,
        unblocked_floor_width_bits: ceil_lg(max_patch),
        unblocked_width_bits: count_width(max_patch as usize),
    }
}
