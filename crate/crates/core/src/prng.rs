//! Bit source used to draw XOR networks.
//!
//! The stream is part of the XQZ format: a file only stores the network seed,
//! so every decoder has to regenerate exactly the same bits. The generator is
//! xorshift64* seeded through one round of SplitMix64:
//!
//! ```text
//! seed:   z = seed + 0x9E3779B97F4A7C15
//!         z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!         z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!         state = z ^ (z >> 31)            (0 is replaced by 0x9E3779B97F4A7C15)
//! step:   state ^= state >> 12
//!         state ^= state << 25
//!         state ^= state >> 27
//!         out = state * 0x2545F4914F6CDD1D (wrapping)
//! bit:    out >> 63
//! ```
//!
//! One step yields one matrix entry; entries are drawn in row-major order.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// xorshift64* generator with SplitMix64 seeding.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(GOLDEN);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Self {
            state: if z == 0 { GOLDEN } else { z },
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Top bit of the next output.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}
