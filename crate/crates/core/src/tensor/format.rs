//! On-disk formats.
//!
//! All integers are little-endian and all bit fields LSB-first.
//!
//! QMAT (quantized matrix input):
//!
//! ```text
//! "QMAT"  u8 version=1  u32 m  u32 n  u8 n_q
//! prune mask: m*n bits, row-major, zero-padded to a byte boundary
//! n_q planes: m*n bits each, each zero-padded to a byte boundary
//! ```
//!
//! XQZ (compressed stream):
//!
//! ```text
//! "XQZ1"  u32 m  u32 n  u8 n_q  u16 n_in  u16 n_out  u32 block_size
//! u64 network_seed  u32 words_per_plane
//! per block:   u8 width_bits
//!   per word:  n_in seed bits, width_bits count bits,
//!              count x ceil(lg n_out) position bits
//! zero padding to the final byte boundary
//! ```
//!
//! Only the file end is byte-aligned, so a block's width byte can straddle
//! a byte boundary.

use super::blocks::{count_width, position_width};
use super::{Block, CompressedTensor, Header, QuantizedMatrix};
use crate::bitio::{BitReader, BitWriter};
use crate::codec::EncodedWord;
use crate::error::{Error, Result};

pub const XQZ_MAGIC: [u8; 4] = *b"XQZ1";
pub const QMAT_MAGIC: [u8; 4] = *b"QMAT";
pub const QMAT_VERSION: u8 = 1;

/// Size of the XQZ fields before the first block.
pub const XQZ_FIXED_HEADER_BITS: usize = 8 * (4 + 4 + 4 + 1 + 2 + 2 + 4 + 8 + 4);

fn narrow<T: TryFrom<usize>>(what: &str, v: usize) -> Result<T> {
    T::try_from(v).map_err(|_| Error::config(format!("{what} = {v} does not fit the XQZ header")))
}

impl CompressedTensor {
    /// Serializes to XQZ bytes.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        Ok(self.write_bits()?.finish())
    }

    /// Exact XQZ length in bits before the final byte padding.
    pub fn serialized_bits(&self) -> Result<usize> {
        Ok(self.write_bits()?.bit_len())
    }

    /// Writer positioned after the last payload bit, before end padding.
    pub(crate) fn write_bits(&self) -> Result<BitWriter> {
        let h = &self.header;
        let mut w = BitWriter::new();
        w.write_bytes(&XQZ_MAGIC);
        w.write_u32(narrow("m", h.m)?);
        w.write_u32(narrow("n", h.n)?);
        w.write_u8(narrow("n_q", h.n_q)?);
        w.write_u16(narrow("n_in", h.n_in)?);
        w.write_u16(narrow("n_out", h.n_out)?);
        w.write_u32(narrow("block_size", h.block_size)?);
        w.write_u64(h.network_seed);
        w.write_u32(narrow("words_per_plane", h.words_per_plane)?);

        let pos_bits = position_width(h.n_out);
        for block in &self.blocks {
            w.write_u8(narrow("width_bits", block.width_bits as usize)?);
            for word in &block.words {
                w.write_vector(&word.seed_vector);
                if count_width(word.n_patch()) > block.width_bits {
                    return Err(Error::config(format!(
                        "{} patches exceed the block's {}-bit count field",
                        word.n_patch(),
                        block.width_bits
                    )));
                }
                w.write_bits(word.n_patch() as u64, block.width_bits);
                for &p in &word.d_patch {
                    w.write_bits(p as u64, pos_bits);
                }
            }
        }
        Ok(w)
    }

    /// Parses XQZ bytes. Any structural inconsistency is reported as
    /// [`Error::CorruptStream`] with the byte offset where it was found.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = BitReader::new(bytes);
        let magic: [u8; 4] = r.read_bytes()?;
        if magic != XQZ_MAGIC {
            return Err(Error::corrupt(0, "bad magic, not an XQZ stream"));
        }
        let header = Header {
            m: r.read_u32()? as usize,
            n: r.read_u32()? as usize,
            n_q: r.read_u8()? as usize,
            n_in: r.read_u16()? as usize,
            n_out: r.read_u16()? as usize,
            block_size: r.read_u32()? as usize,
            network_seed: r.read_u64()?,
            words_per_plane: r.read_u32()? as usize,
        };
        header
            .validate()
            .map_err(|e| Error::corrupt(r.byte_offset(), e.to_string()))?;

        let total = header.total_words();
        // every word carries at least its seed bits
        if (total as u128) * (header.n_in as u128) > r.remaining_bits() as u128 {
            return Err(Error::corrupt(
                r.byte_offset(),
                format!("{total} words cannot fit in the remaining stream"),
            ));
        }

        let pos_bits = position_width(header.n_out);
        let max_width = count_width(header.n_out);
        let mut blocks = Vec::with_capacity(header.block_count());
        for b in 0..header.block_count() {
            let offset = r.byte_offset();
            let width_bits = r.read_u8()? as u32;
            if width_bits > max_width {
                return Err(Error::corrupt(
                    offset,
                    format!(
                        "count width {width_bits} exceeds {max_width} for n_out {}",
                        header.n_out
                    ),
                ));
            }
            let len = header.block_len(b);
            let mut words = Vec::with_capacity(len);
            for _ in 0..len {
                let seed_vector = r.read_vector(header.n_in)?;
                let offset = r.byte_offset();
                let n_patch = r.read_bits(width_bits)? as usize;
                if n_patch > header.n_out {
                    return Err(Error::corrupt(
                        offset,
                        format!("{n_patch} patches in a {}-bit word", header.n_out),
                    ));
                }
                let mut d_patch = Vec::with_capacity(n_patch);
                for _ in 0..n_patch {
                    let offset = r.byte_offset();
                    let p = r.read_bits(pos_bits)? as usize;
                    if p >= header.n_out || d_patch.last().is_some_and(|&last| p <= last) {
                        return Err(Error::corrupt(
                            offset,
                            format!("patch position {p} out of range or out of order"),
                        ));
                    }
                    d_patch.push(p);
                }
                words.push(EncodedWord {
                    seed_vector,
                    d_patch,
                });
            }
            blocks.push(Block { width_bits, words });
        }
        r.align_strict()?;
        r.expect_end()?;
        Ok(CompressedTensor { header, blocks })
    }
}

/// Writes the QMAT container.
pub fn write_qmat(qm: &QuantizedMatrix) -> Result<Vec<u8>> {
    let mut w = BitWriter::new();
    w.write_bytes(&QMAT_MAGIC);
    w.write_u8(QMAT_VERSION);
    w.write_u32(narrow("m", qm.rows())?);
    w.write_u32(narrow("n", qm.cols())?);
    w.write_u8(narrow("n_q", qm.n_q())?);
    w.write_vector(qm.prune_mask());
    w.align();
    for p in qm.planes() {
        w.write_vector(p);
        w.align();
    }
    Ok(w.finish())
}

/// Reads the QMAT container. Plane bits at pruned positions are cleared.
pub fn read_qmat(bytes: &[u8]) -> Result<QuantizedMatrix> {
    let mut r = BitReader::new(bytes);
    let magic: [u8; 4] = r.read_bytes()?;
    if magic != QMAT_MAGIC {
        return Err(Error::corrupt(0, "bad magic, not a QMAT file"));
    }
    let version = r.read_u8()?;
    if version != QMAT_VERSION {
        return Err(Error::corrupt(
            4,
            format!("unsupported QMAT version {version}"),
        ));
    }
    let m = r.read_u32()? as usize;
    let n = r.read_u32()? as usize;
    let n_q = r.read_u8()? as usize;
    let len = m
        .checked_mul(n)
        .ok_or_else(|| Error::corrupt(5, "matrix dimensions overflow"))?;
    let padded = len.div_ceil(8) * 8;
    if (padded as u128) * (n_q as u128 + 1) > r.remaining_bits() as u128 {
        return Err(Error::corrupt(r.byte_offset(), "truncated QMAT body"));
    }
    let mask = r.read_vector(len)?;
    r.align_strict()?;
    let mut planes = Vec::with_capacity(n_q);
    for _ in 0..n_q {
        planes.push(r.read_vector(len)?);
        r.align_strict()?;
    }
    r.expect_end()?;
    QuantizedMatrix::new(m, n, mask, planes)
}

/// Serializes a compressed tensor to XQZ bytes.
pub fn serialize(ct: &CompressedTensor) -> Result<Vec<u8>> {
    ct.to_bytes()
}

/// Parses XQZ bytes.
pub fn deserialize(bytes: &[u8]) -> Result<CompressedTensor> {
    CompressedTensor::from_bytes(bytes)
}
