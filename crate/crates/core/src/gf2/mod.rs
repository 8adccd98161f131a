//! Bit-packed linear algebra over GF(2).
//!
//! [`BitVector`] and [`BitMatrix`] are dense and packed LSB-first into `u64`
//! words. [`RrefState`] keeps an augmented system in fully reduced
//! row-echelon form and accepts equations one at a time, which is the shape
//! the patch search needs.

mod bitvec;
mod matrix;
mod rref;

pub use bitvec::BitVector;
pub use matrix::BitMatrix;
pub use rref::{Append, RrefState};

pub(crate) use bitvec::check_len;
