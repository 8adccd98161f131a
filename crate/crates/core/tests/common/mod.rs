//! Reference implementations used as oracles. They work on plain `bool`
//! slices and enumerate where possible, sharing no code with the crate's
//! packed routines.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xqz::codec::{MaskedWord, XorNetwork};
use xqz::gf2::{BitMatrix, BitVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> BitVector {
    let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(0.5)).collect();
    BitVector::from_bools(&bits)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
    let rows = (0..rows).map(|_| random_vector(rng, cols)).collect();
    BitMatrix::from_rows(cols, rows).unwrap()
}

pub fn random_word(rng: &mut impl Rng, n_out: usize, sparsity: f64) -> MaskedWord {
    let care: Vec<bool> = (0..n_out).map(|_| !rng.random_bool(sparsity)).collect();
    MaskedWord::new(random_vector(rng, n_out), BitVector::from_bools(&care)).unwrap()
}

pub fn to_bools(v: &BitVector) -> Vec<bool> {
    v.iter().collect()
}

pub fn to_table(m: &BitMatrix) -> Vec<Vec<bool>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Row-by-row, bit-by-bit product.
pub fn naive_matvec(m: &[Vec<bool>], v: &[bool]) -> Vec<bool> {
    m.iter()
        .map(|row| {
            let mut acc = false;
            for j in 0..v.len() {
                acc ^= row[j] & v[j];
            }
            acc
        })
        .collect()
}

/// Bits of `x` as a vector, LSB first.
pub fn int_bits(x: u64, len: usize) -> Vec<bool> {
    (0..len).map(|j| (x >> j) & 1 == 1).collect()
}

/// Rank as `log2 |row space|`, by enumerating every subset of rows.
pub fn span_rank(m: &[Vec<bool>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut seen = std::collections::HashSet::new();
    for subset in 0u64..(1 << m.len()) {
        let mut acc = vec![false; cols];
        for (i, row) in m.iter().enumerate() {
            if (subset >> i) & 1 == 1 {
                for j in 0..cols {
                    acc[j] ^= row[j];
                }
            }
        }
        seen.insert(acc);
    }
    seen.len().trailing_zeros() as usize
}

/// Whether some `x` satisfies every `(row, rhs)`, by trying all `x`.
pub fn brute_solvable(eqs: &[(Vec<bool>, bool)], n_vars: usize) -> bool {
    (0u64..(1 << n_vars)).any(|x| {
        let xb = int_bits(x, n_vars);
        eqs.iter()
            .all(|(row, rhs)| naive_matvec(std::slice::from_ref(row), &xb)[0] == *rhs)
    })
}

/// Mismatched care bits of `x` on `word`.
pub fn cost(net: &[Vec<bool>], word: &MaskedWord, x: &[bool]) -> usize {
    let out = naive_matvec(net, x);
    (0..out.len())
        .filter(|&i| word.care_mask().get(i) && out[i] != word.values().get(i))
        .count()
}

/// Minimum mismatch count and the smallest seed achieving it.
pub fn brute_minimum(net: &XorNetwork, word: &MaskedWord) -> (usize, u64) {
    let table = to_table(net.matrix());
    (0u64..(1 << net.n_in()))
        .map(|x| (cost(&table, word, &int_bits(x, net.n_in())), x))
        .min()
        .unwrap()
}

/// Greedy admission replayed with brute-force consistency checks: a care
/// equation is kept only if some seed satisfies all kept equations.
pub fn replay_greedy(net: &XorNetwork, word: &MaskedWord) -> usize {
    let table = to_table(net.matrix());
    let n_in = net.n_in();
    let satisfies = |x: u64, idx: &[usize]| {
        let out = naive_matvec(&table, &int_bits(x, n_in));
        idx.iter().all(|&i| out[i] == word.values().get(i))
    };
    let mut kept: Vec<usize> = Vec::new();
    for i in word.care_mask().iter_ones() {
        kept.push(i);
        if !(0u64..(1 << n_in)).any(|x| satisfies(x, &kept)) {
            kept.pop();
        }
    }
    let x = (0u64..(1 << n_in)).find(|&x| satisfies(x, &kept)).unwrap();
    cost(&table, word, &int_bits(x, n_in))
}
