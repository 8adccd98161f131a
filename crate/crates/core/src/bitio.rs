//! LSB-first bit packing.
//!
//! Field bits are emitted least significant first, and bit `k` of the stream
//! lands in byte `k / 8` at position `k % 8`. Multi-byte integers written
//! through this path therefore come out little-endian when the stream is
//! byte-aligned.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    buf: Vec<u8>,
    bits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bits written so far.
    pub fn bit_len(&self) -> usize {
        self.bits
    }

    pub fn write_bit(&mut self, bit: bool) {
        let off = self.bits % 8;
        if off == 0 {
            self.buf.push(0);
        }
        if bit {
            *self.buf.last_mut().unwrap() |= 1 << off;
        }
        self.bits += 1;
    }

    /// Low `width` bits of `value`, LSB first.
    pub fn write_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0, "value does not fit");
        for k in 0..width {
            self.write_bit((value >> k) & 1 == 1);
        }
    }

    pub fn write_u8(&mut self, v: u8) {
        self.write_bits(v as u64, 8);
    }

    pub fn write_u16(&mut self, v: u16) {
        self.write_bits(v as u64, 16);
    }

    pub fn write_u32(&mut self, v: u32) {
        self.write_bits(v as u64, 32);
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write_bits(v, 64);
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u8(b);
        }
    }

    pub fn write_vector(&mut self, v: &BitVector) {
        for b in v.iter() {
            self.write_bit(b);
        }
    }

    /// Pads with zero bits up to the next byte boundary.
    pub fn align(&mut self) {
        self.bits = self.buf.len() * 8;
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn bit_pos(&self) -> usize {
        self.pos
    }

    pub fn byte_offset(&self) -> usize {
        self.pos / 8
    }

    pub fn remaining_bits(&self) -> usize {
        self.data.len() * 8 - self.pos
    }

    fn truncated(&self, need: usize) -> Error {
        Error::corrupt(
            self.byte_offset(),
            format!("truncated stream: needed {need} more bits"),
        )
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.data.len() * 8 {
            return Err(self.truncated(1));
        }
        let bit = (self.data[self.pos / 8] >> (self.pos % 8)) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64> {
        debug_assert!(width <= 64);
        if self.remaining_bits() < width as usize {
            return Err(self.truncated(width as usize));
        }
        let mut v = 0u64;
        for k in 0..width {
            if self.read_bit()? {
                v |= 1 << k;
            }
        }
        Ok(v)
    }

    pub fn read_u8(&mut self) -> Result<u8> {
        self.read_bits(8).map(|v| v as u8)
    }

    pub fn read_u16(&mut self) -> Result<u16> {
        self.read_bits(16).map(|v| v as u16)
    }

    pub fn read_u32(&mut self) -> Result<u32> {
        self.read_bits(32).map(|v| v as u32)
    }

    pub fn read_u64(&mut self) -> Result<u64> {
        self.read_bits(64)
    }

    pub fn read_bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut out = [0u8; N];
        for b in out.iter_mut() {
            *b = self.read_u8()?;
        }
        Ok(out)
    }

    pub fn read_vector(&mut self, len: usize) -> Result<BitVector> {
        if self.remaining_bits() < len {
            return Err(self.truncated(len));
        }
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            if self.read_bit()? {
                v.set(i, true);
            }
        }
        Ok(v)
    }

    /// Skips to the next byte boundary; the skipped bits must be zero.
    pub fn align_strict(&mut self) -> Result<()> {
        while !self.pos.is_multiple_of(8) {
            if self.read_bit()? {
                return Err(Error::corrupt(self.byte_offset(), "nonzero padding bits"));
            }
        }
        Ok(())
    }

    /// Errors unless the whole input has been consumed.
    pub fn expect_end(&self) -> Result<()> {
        if self.pos == self.data.len() * 8 {
            Ok(())
        } else {
            Err(Error::corrupt(
                self.byte_offset(),
                format!("{} trailing bytes", self.data.len() - self.byte_offset()),
            ))
        }
    }
}
