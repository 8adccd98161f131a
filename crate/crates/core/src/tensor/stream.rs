use super::blocks::{assign_block_widths, count_width};
use super::{slice_words, words_per_plane, QuantizedMatrix};
use crate::codec::{decode_word, encode_words, EncodedWord, Strategy, XorNetwork};
use crate::error::{Error, Result};
use crate::gf2::{check_len, BitVector};

pub const DEFAULT_BLOCK_SIZE: usize = 64;

/// Stream parameters. Together with the network seed they are enough to
/// rebuild the network and the word layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub m: usize,
    pub n: usize,
    pub n_q: usize,
    pub n_in: usize,
    pub n_out: usize,
    pub block_size: usize,
    pub network_seed: u64,
    /// Words per plane, `ceil(m n / n_out)`.
    pub words_per_plane: usize,
}

impl Header {
    pub fn total_words(&self) -> usize {
        self.words_per_plane * self.n_q
    }

    pub fn block_count(&self) -> usize {
        self.total_words().div_ceil(self.block_size)
    }

    /// Number of words in block `b`.
    pub fn block_len(&self, b: usize) -> usize {
        let start = b * self.block_size;
        self.block_size.min(self.total_words() - start)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n_in == 0 || self.n_in > self.n_out {
            return Err(Error::config(format!(
                "need 1 <= n_in <= n_out, got n_in={} n_out={}",
                self.n_in, self.n_out
            )));
        }
        if self.block_size == 0 {
            return Err(Error::config("block_size must be at least 1"));
        }
        let len = self
            .m
            .checked_mul(self.n)
            .ok_or_else(|| Error::config("matrix dimensions overflow"))?;
        if self.words_per_plane != words_per_plane(len, self.n_out) {
            return Err(Error::config(format!(
                "word count {} does not match ceil({len} / {})",
                self.words_per_plane, self.n_out
            )));
        }
        Ok(())
    }
}

/// Words sharing one patch-count field width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub width_bits: u32,
    pub words: Vec<EncodedWord>,
}

/// An encoded tensor: header plus blocked word stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedTensor {
    pub header: Header,
    pub blocks: Vec<Block>,
}

impl CompressedTensor {
    pub fn words(&self) -> impl Iterator<Item = &EncodedWord> {
        self.blocks.iter().flat_map(|b| b.words.iter())
    }

    /// `n_patch` of every word in stream order.
    pub fn patch_counts(&self) -> Vec<usize> {
        self.words().map(EncodedWord::n_patch).collect()
    }

    /// Rebuilds the network named by the header.
    pub fn network(&self) -> Result<XorNetwork> {
        XorNetwork::generate(
            self.header.n_out,
            self.header.n_in,
            self.header.network_seed,
        )
    }
}

/// Encodes with the greedy search.
pub fn encode_tensor(
    qm: &QuantizedMatrix,
    net: &XorNetwork,
    block_size: usize,
) -> Result<CompressedTensor> {
    encode_tensor_with(qm, net, block_size, Strategy::Greedy)
}

pub fn encode_tensor_with(
    qm: &QuantizedMatrix,
    net: &XorNetwork,
    block_size: usize,
    strategy: Strategy,
) -> Result<CompressedTensor> {
    let header = Header {
        m: qm.rows(),
        n: qm.cols(),
        n_q: qm.n_q(),
        n_in: net.n_in(),
        n_out: net.n_out(),
        block_size,
        network_seed: net.seed(),
        words_per_plane: words_per_plane(qm.len(), net.n_out()),
    };
    header.validate()?;

    let words = slice_words(qm, net.n_out())?;
    let encoded = encode_words(net, &words, strategy)?;
    let counts: Vec<usize> = encoded.iter().map(EncodedWord::n_patch).collect();
    let widths = assign_block_widths(&counts, block_size);

    let mut rest = encoded.into_iter();
    let blocks = widths
        .into_iter()
        .map(|width_bits| Block {
            width_bits,
            words: rest.by_ref().take(block_size).collect(),
        })
        .collect();
    Ok(CompressedTensor { header, blocks })
}

/// Raw decoded planes before re-masking. Padding bits are dropped; bits at
/// pruned positions are whatever the network produced.
pub fn decode_planes(ct: &CompressedTensor, net: &XorNetwork) -> Result<Vec<BitVector>> {
    let h = &ct.header;
    if net.n_in() != h.n_in || net.n_out() != h.n_out {
        return Err(Error::config(format!(
            "network is {}x{}, stream expects {}x{}",
            net.n_out(),
            net.n_in(),
            h.n_out,
            h.n_in
        )));
    }
    let len = h.m * h.n;
    let stored = ct.blocks.iter().map(|b| b.words.len()).sum::<usize>();
    if stored != h.total_words() {
        return Err(Error::corrupt(
            0,
            format!(
                "stream holds {stored} words, header implies {}",
                h.total_words()
            ),
        ));
    }

    for b in &ct.blocks {
        if let Some(w) = b
            .words
            .iter()
            .find(|w| count_width(w.n_patch()) > b.width_bits)
        {
            return Err(Error::corrupt(
                0,
                format!(
                    "{} patches do not fit a {}-bit count field",
                    w.n_patch(),
                    b.width_bits
                ),
            ));
        }
    }

    let mut planes = vec![BitVector::zeros(len); h.n_q];
    for (k, enc) in ct.words().enumerate() {
        let out = decode_word(net, enc)?;
        let plane = &mut planes[k / h.words_per_plane];
        let base = (k % h.words_per_plane) * h.n_out;
        for i in out.iter_ones() {
            if base + i < len {
                plane.set(base + i, true);
            }
        }
    }
    Ok(planes)
}

/// Decodes with the network regenerated from the header seed, then clears
/// every pruned position using `prune_mask`.
pub fn decode_tensor(ct: &CompressedTensor, prune_mask: &BitVector) -> Result<QuantizedMatrix> {
    decode_tensor_with(ct, &ct.network()?, prune_mask)
}

pub fn decode_tensor_with(
    ct: &CompressedTensor,
    net: &XorNetwork,
    prune_mask: &BitVector,
) -> Result<QuantizedMatrix> {
    let h = &ct.header;
    check_len("prune mask", h.m * h.n, prune_mask.len())?;
    let planes = decode_planes(ct, net)?;
    QuantizedMatrix::new(h.m, h.n, prune_mask.clone(), planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::make_network;

    fn sample(m: usize, n: usize, n_q: usize, keep_every: usize) -> QuantizedMatrix {
        let levels: Vec<Option<u32>> = (0..m * n)
            .map(|k| {
                (k % keep_every == 0)
                    .then_some((k as u32).wrapping_mul(2654435761) >> 29 & ((1 << n_q) - 1))
            })
            .collect();
        QuantizedMatrix::from_levels(m, n, n_q, &levels).unwrap()
    }

    #[test]
    fn fully_pruned_is_patch_free() {
        let qm = QuantizedMatrix::from_levels(5, 7, 2, &[None; 35]).unwrap();
        let net = make_network(16, 4, 1).unwrap();
        let ct = encode_tensor(&qm, &net, 4).unwrap();
        assert!(ct.patch_counts().iter().all(|&p| p == 0));
        assert!(ct.blocks.iter().all(|b| b.width_bits == 0));
        let back = decode_tensor(&ct, qm.prune_mask()).unwrap();
        assert!(back.planes().iter().all(BitVector::is_zero));
    }

    #[test]
    fn four_by_four_three_bit_stream() {
        let qm = sample(4, 4, 3, 2);
        let net = make_network(4, 3, 5).unwrap();
        let ct = encode_tensor(&qm, &net, DEFAULT_BLOCK_SIZE).unwrap();
        assert_eq!(ct.header.words_per_plane, 4);
        assert_eq!(ct.words().count(), 12);
        assert!(ct.words().all(|w| w.seed_vector.len() == 3));
        let back = decode_tensor(&ct, qm.prune_mask()).unwrap();
        assert!(back.care_bits_equal(&qm));
    }

    #[test]
    fn blocks_follow_block_size() {
        let qm = sample(10, 10, 2, 3);
        let net = make_network(12, 4, 2).unwrap();
        let ct = encode_tensor(&qm, &net, 5).unwrap();
        // 9 words per plane, 18 total
        assert_eq!(ct.header.total_words(), 18);
        assert_eq!(ct.blocks.len(), 4);
        assert_eq!(ct.blocks[3].words.len(), 3);
        for b in &ct.blocks {
            let max = b.words.iter().map(EncodedWord::n_patch).max().unwrap();
            assert_eq!(b.width_bits, count_width(max));
        }
    }

    #[test]
    fn mask_length_checked() {
        let qm = sample(3, 3, 1, 2);
        let net = make_network(4, 2, 2).unwrap();
        let ct = encode_tensor(&qm, &net, 2).unwrap();
        assert!(decode_tensor(&ct, &BitVector::zeros(8)).is_err());
    }

    #[test]
    fn wrong_network_rejected() {
        let qm = sample(3, 3, 1, 2);
        let ct = encode_tensor(&qm, &make_network(4, 2, 2).unwrap(), 2).unwrap();
        assert!(decode_tensor_with(&ct, &make_network(5, 2, 2).unwrap(), qm.prune_mask()).is_err());
    }

    #[test]
    fn zero_block_size_rejected() {
        let qm = sample(3, 3, 1, 2);
        assert!(encode_tensor(&qm, &make_network(4, 2, 2).unwrap(), 0).is_err());
    }
}
