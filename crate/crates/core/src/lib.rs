//! Fixed-rate compression of sparse quantized weight matrices.
//!
//! Each bit-plane of a pruned, quantized matrix is cut into `n_out`-bit words
//! in which pruned weights are don't-care bits. Every word is replaced by an
//! `n_in`-bit seed that a fixed random XOR-gate network expands back into a
//! word agreeing on all care bits, plus a short patch list for the care bits
//! the network could not produce. Decoding runs at one word per cycle per
//! network, independent of where the pruned weights fall.
//!
//! ```
//! use xqz::codec::{decode_word, encode_word, make_network, MaskedWord};
//!
//! let net = make_network(16, 6, 42)?;
//! let word = MaskedWord::new(
//!     "1000110000100001".parse()?,
//!     "1001110000110001".parse()?,
//! )?;
//! let enc = encode_word(&net, &word)?;
//! assert!(word.matches(&decode_word(&net, &enc)?));
//! # Ok::<(), xqz::Error>(())
//! ```
//!
//! Modules:
//!
//! - [`gf2`]: packed GF(2) vectors, matrices and incremental RREF.
//! - [`codec`]: the network and per-word encode/decode.
//! - [`tensor`]: bit-plane slicing, blocked streams, size accounting, file formats.
//! - [`synth`]: synthetic streams and parameter sweeps.
//! - [`sim`]: patch-FIFO and CSR decode-time models.

pub mod bitio;
pub mod codec;
mod error;
pub mod gf2;
pub mod prng;
pub mod sim;
pub mod synth;
pub mod tensor;

pub use error::{Error, Result};
