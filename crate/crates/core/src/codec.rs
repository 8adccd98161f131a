//! Word-level encryption through a random XOR-gate network.
//!
//! A network is a fixed `n_out x n_in` binary matrix `M`. Decoding a seed
//! vector `x` of `n_in` bits yields the `n_out` bits `M x`. Encoding a
//! [`MaskedWord`] means finding an `x` whose image agrees with the word on its
//! care bits. Care bits the network cannot reach are listed as patches and
//! flipped by the decoder, so the round trip is always exact on care bits.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{check_len, Append, BitMatrix, BitVector, RrefState};
use crate::prng::XorShift64Star;

/// Default upper bound on `n_in` for [`encode_word_exhaustive`].
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// The fixed XOR-gate network shared by encoder and decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorNetwork {
    matrix: BitMatrix,
    seed: u64,
}

impl XorNetwork {
    /// Draws an `n_out x n_in` network from `seed`, one fair bit per entry in
    /// row-major order (see [`crate::prng`]). All-zero rows are kept.
    pub fn generate(n_out: usize, n_in: usize, seed: u64) -> Result<Self> {
        validate_dims(n_out, n_in)?;
        let mut rng = XorShift64Star::new(seed);
        let mut matrix = BitMatrix::zeros(n_out, n_in);
        for i in 0..n_out {
            for j in 0..n_in {
                if rng.next_bit() {
                    matrix.set(i, j, true);
                }
            }
        }
        Ok(Self { matrix, seed })
    }

    /// Wraps an explicit matrix. The result cannot be regenerated from `seed`,
    /// so streams built on it must be decoded with the same network value.
    pub fn from_matrix(matrix: BitMatrix, seed: u64) -> Result<Self> {
        validate_dims(matrix.rows(), matrix.cols())?;
        Ok(Self { matrix, seed })
    }

    pub fn n_out(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_in(&self) -> usize {
        self.matrix.cols()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Network output for a seed vector.
    pub fn expand(&self, seed_vector: &BitVector) -> Result<BitVector> {
        self.matrix.matvec(seed_vector)
    }
}

fn validate_dims(n_out: usize, n_in: usize) -> Result<()> {
    if n_in == 0 {
        return Err(Error::config("n_in must be at least 1"));
    }
    if n_in > n_out {
        return Err(Error::config(format!(
            "n_in ({n_in}) must not exceed n_out ({n_out})"
        )));
    }
    Ok(())
}

/// Free function form of [`XorNetwork::generate`].
pub fn make_network(n_out: usize, n_in: usize, seed: u64) -> Result<XorNetwork> {
    XorNetwork::generate(n_out, n_in, seed)
}

/// An `n_out`-bit slice of a bit-plane with its care mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedWord {
    values: BitVector,
    care: BitVector,
}

impl MaskedWord {
    /// Value bits outside `care` are cleared.
    pub fn new(values: BitVector, care: BitVector) -> Result<Self> {
        check_len("care mask", values.len(), care.len())?;
        let values = &values & &care;
        Ok(Self { values, care })
    }

    /// A word in which every bit is a care bit.
    pub fn all_care(values: BitVector) -> Self {
        let care = BitVector::ones(values.len());
        Self { values, care }
    }

    pub fn n_out(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &BitVector {
        &self.values
    }

    pub fn care_mask(&self) -> &BitVector {
        &self.care
    }

    pub fn care_count(&self) -> usize {
        self.care.count_ones()
    }

    /// Care positions where `decoded` disagrees with this word.
    pub fn mismatches(&self, decoded: &BitVector) -> Vec<usize> {
        (&(decoded ^ &self.values) & &self.care)
            .iter_ones()
            .collect()
    }

    /// True when `decoded` reproduces every care bit.
    pub fn matches(&self, decoded: &BitVector) -> bool {
        decoded.len() == self.n_out() && decoded.masked_distance(&self.values, &self.care) == 0
    }
}

/// Seed vector plus the care positions the decoder must flip.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedWord {
    pub seed_vector: BitVector,
    /// Strictly increasing output positions.
    pub d_patch: Vec<usize>,
}

impl EncodedWord {
    pub fn n_patch(&self) -> usize {
        self.d_patch.len()
    }
}

/// Outcome of the greedy patch search, with bookkeeping for inspection.
#[derive(Debug, Clone)]
pub struct PatchSearch {
    pub encoded: EncodedWord,
    /// Number of equations offered to the RREF, one per care bit.
    pub appends: usize,
    /// Care positions whose equation conflicted and was dropped.
    pub discarded: Vec<usize>,
    pub rank: usize,
}

/// Greedy patch search.
///
/// Care bits are visited in ascending position order. Each contributes the
/// equation `row_i(M) · x = value_i`, which is kept if it is consistent with
/// the ones kept so far and dropped otherwise. The kept system is solved with
/// free variables at zero, and every care bit the resulting output still gets
/// wrong becomes a patch. A dropped equation that the solution happens to
/// satisfy costs nothing.
pub fn search_patches(net: &XorNetwork, word: &MaskedWord) -> Result<PatchSearch> {
    check_len("word", net.n_out(), word.n_out())?;
    let mut rref = RrefState::new(net.n_in());
    let mut discarded = Vec::new();
    let mut appends = 0;
    for i in word.care_mask().iter_ones() {
        appends += 1;
        if rref.append(net.matrix().row(i), word.values().get(i))? == Append::Conflict {
            discarded.push(i);
        }
    }
    let seed_vector = rref.solve();
    let decoded = net.expand(&seed_vector)?;
    let d_patch = word.mismatches(&decoded);
    Ok(PatchSearch {
        encoded: EncodedWord {
            seed_vector,
            d_patch,
        },
        appends,
        discarded,
        rank: rref.rank(),
    })
}

/// Encodes one word with the greedy patch search.
pub fn encode_word(net: &XorNetwork, word: &MaskedWord) -> Result<EncodedWord> {
    search_patches(net, word).map(|s| s.encoded)
}

/// Encodes one word by trying all `2^n_in` seed vectors.
///
/// Picks a seed vector with the fewest mismatched care bits; ties go to the
/// smallest seed read as an unsigned integer with input 0 as the LSB. Seeds
/// are visited in Gray-code order so each step is a single column XOR.
pub fn encode_word_exhaustive(
    net: &XorNetwork,
    word: &MaskedWord,
    limit: usize,
) -> Result<EncodedWord> {
    check_len("word", net.n_out(), word.n_out())?;
    let n_in = net.n_in();
    if n_in > limit || n_in >= 64 {
        return Err(Error::config(format!(
            "exhaustive search needs n_in <= {limit}, got {n_in}"
        )));
    }
    if word.care_count() == 0 {
        return Ok(EncodedWord {
            seed_vector: BitVector::zeros(n_in),
            d_patch: Vec::new(),
        });
    }

    let columns: Vec<BitVector> = (0..n_in).map(|j| net.matrix().column(j)).collect();
    let mut output = BitVector::zeros(net.n_out());
    let mut best = (
        word.values().masked_distance(&output, word.care_mask()),
        0u64,
    );
    for step in 1u64..(1u64 << n_in) {
        let bit = step.trailing_zeros() as usize;
        output ^= &columns[bit];
        let seed = step ^ (step >> 1);
        let cost = output.masked_distance(word.values(), word.care_mask());
        if (cost, seed) < best {
            best = (cost, seed);
        }
    }

    let seed_vector = BitVector::from_u64(n_in, best.1);
    let decoded = net.expand(&seed_vector)?;
    Ok(EncodedWord {
        seed_vector,
        d_patch: word.mismatches(&decoded),
    })
}

/// Network output for `enc.seed_vector` with each patch position flipped.
pub fn decode_word(net: &XorNetwork, enc: &EncodedWord) -> Result<BitVector> {
    check_len("seed vector", net.n_in(), enc.seed_vector.len())?;
    let mut out = net.expand(&enc.seed_vector)?;
    for &p in &enc.d_patch {
        if p >= net.n_out() {
            return Err(Error::corrupt(
                0,
                format!("patch position {p} outside word of {} bits", net.n_out()),
            ));
        }
        out.flip(p);
    }
    Ok(out)
}

/// Which search produces the seed vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Greedy,
    Exhaustive {
        limit: usize,
    },
}

impl Strategy {
    pub fn exhaustive() -> Self {
        Strategy::Exhaustive {
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }

    pub fn encode(self, net: &XorNetwork, word: &MaskedWord) -> Result<EncodedWord> {
        match self {
            Strategy::Greedy => encode_word(net, word),
            Strategy::Exhaustive { limit } => encode_word_exhaustive(net, word, limit),
        }
    }
}

/// Encodes a word sequence in parallel. The output order matches `words`.
pub fn encode_words(
    net: &XorNetwork,
    words: &[MaskedWord],
    strategy: Strategy,
) -> Result<Vec<EncodedWord>> {
    words.par_iter().map(|w| strategy.encode(net, w)).collect()
}
