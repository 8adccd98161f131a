use std::fmt;

use super::bitvec::{check_len, BitVector};
use crate::error::Result;

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            check_len("matrix row", cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit);
    }

    /// Column `j` as a vector of length `rows`.
    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    /// `M v` over GF(2): bit `i` of the result is the parity of `row_i & v`.
    pub fn matvec(&self, v: &BitVector) -> Result<BitVector> {
        check_len("matvec operand", self.cols, v.len())?;
        let mut out = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Rank by forward elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for r in rows.iter_mut().skip(rank + 1) {
                if r.get(col) {
                    *r ^= &pivot;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matvec() {
        let m = BitMatrix::identity(4);
        let v: BitVector = "1011".parse().unwrap();
        assert_eq!(m.matvec(&v).unwrap(), v);
    }

    #[test]
    fn all_ones_row_gives_parity() {
        let m = BitMatrix::from_rows(8, vec![BitVector::ones(8)]).unwrap();
        let v: BitVector = "10101010".parse().unwrap();
        assert_eq!(m.matvec(&v).unwrap().to_string(), "0");
        let odd: BitVector = "10101011".parse().unwrap();
        assert_eq!(m.matvec(&odd).unwrap().to_string(), "1");
    }

    #[test]
    fn matvec_rejects_wrong_length() {
        let m = BitMatrix::zeros(2, 3);
        assert!(m.matvec(&BitVector::zeros(4)).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(BitMatrix::from_rows(3, vec![BitVector::zeros(3), BitVector::zeros(2)]).is_err());
    }

    #[test]
    fn rank_of_small_cases() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        let m = BitMatrix::from_rows(
            3,
            vec![
                "110".parse().unwrap(),
                "011".parse().unwrap(),
                "101".parse().unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
    }
}
