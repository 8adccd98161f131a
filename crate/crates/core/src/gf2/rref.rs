use super::bitvec::{check_len, BitVector};
use crate::error::Result;

/// What happened to an equation offered to [`RrefState::append`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Append {
    /// Independent of the stored rows; rank grew by one.
    Pivot,
    /// Implied by the stored rows.
    Redundant,
    /// Contradicts the stored rows. The state was left untouched.
    Conflict,
}

impl Append {
    pub fn is_consistent(self) -> bool {
        !matches!(self, Append::Conflict)
    }
}

/// Incrementally maintained reduced row-echelon form of an augmented system
/// `A x = b` over GF(2).
///
/// Each stored row is `n_vars + 1` bits wide with the right-hand side in the
/// last position. Rows are kept sorted by pivot column, and every pivot column
/// is zero in all other rows, so a consistency check costs one pass over the
/// pivots and [`RrefState::solve`] is a read-off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefState {
    n_vars: usize,
    pivots: Vec<(usize, BitVector)>,
}

impl RrefState {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            pivots: Vec::with_capacity(n_vars),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `(pivot column, augmented row)` pairs in increasing pivot order.
    pub fn pivot_rows(&self) -> &[(usize, BitVector)] {
        &self.pivots
    }

    /// Offers the equation `row · x = rhs`.
    ///
    /// On [`Append::Conflict`] the state is unchanged, which is what lets the
    /// patch search drop a care bit and carry on.
    pub fn append(&mut self, row: &BitVector, rhs: bool) -> Result<Append> {
        check_len("equation row", self.n_vars, row.len())?;
        let mut aug = BitVector::zeros(self.n_vars + 1);
        for j in row.iter_ones() {
            aug.set(j, true);
        }
        aug.set(self.n_vars, rhs);

        for (col, prow) in &self.pivots {
            if aug.get(*col) {
                aug ^= prow;
            }
        }

        let pivot = match aug.first_one() {
            Some(p) if p < self.n_vars => p,
            Some(_) => return Ok(Append::Conflict),
            None => return Ok(Append::Redundant),
        };

        for (_, prow) in self.pivots.iter_mut() {
            if prow.get(pivot) {
                *prow ^= &aug;
            }
        }
        let at = self.pivots.partition_point(|(c, _)| *c < pivot);
        self.pivots.insert(at, (pivot, aug));
        Ok(Append::Pivot)
    }

    /// A solution of every admitted equation, with free variables set to zero.
    pub fn solve(&self) -> BitVector {
        let mut x = BitVector::zeros(self.n_vars);
        for (col, prow) in &self.pivots {
            if prow.get(self.n_vars) {
                x.set(*col, true);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn check_invariants(st: &RrefState) {
        let cols: Vec<usize> = st.pivot_rows().iter().map(|(c, _)| *c).collect();
        assert!(cols.windows(2).all(|w| w[0] < w[1]));
        for (c, row) in st.pivot_rows() {
            assert!(row.get(*c));
            for (other, _) in st.pivot_rows() {
                if other != c {
                    assert!(!row.get(*other));
                }
            }
        }
        assert!(st.rank() <= st.n_vars());
    }

    #[test]
    fn first_pivot() {
        let mut st = RrefState::new(3);
        assert_eq!(st.append(&bv("100"), true).unwrap(), Append::Pivot);
        assert_eq!(st.rank(), 1);
    }

    #[test]
    fn direct_contradiction_leaves_state() {
        let mut st = RrefState::new(3);
        st.append(&bv("100"), true).unwrap();
        let before = st.clone();
        let out = st.append(&bv("100"), false).unwrap();
        assert_eq!(out, Append::Conflict);
        assert!(!out.is_consistent());
        assert_eq!(st, before);
    }

    #[test]
    fn repeated_equation_is_redundant() {
        let mut st = RrefState::new(4);
        st.append(&bv("1101"), true).unwrap();
        assert_eq!(st.append(&bv("1101"), true).unwrap(), Append::Redundant);
        assert_eq!(st.rank(), 1);
    }

    #[test]
    fn empty_state_solves_to_zero() {
        assert_eq!(RrefState::new(4).solve().to_string(), "0000");
    }

    #[test]
    fn forced_unique_solution() {
        let mut st = RrefState::new(2);
        st.append(&bv("11"), true).unwrap();
        st.append(&bv("01"), false).unwrap();
        assert_eq!(st.solve().to_string(), "10");
        check_invariants(&st);
    }

    #[test]
    fn back_substitution_keeps_reduced_form() {
        let mut st = RrefState::new(4);
        st.append(&bv("0110"), true).unwrap();
        st.append(&bv("0011"), false).unwrap();
        st.append(&bv("1100"), true).unwrap();
        st.append(&bv("0100"), true).unwrap();
        check_invariants(&st);
        assert_eq!(st.rank(), 4);
    }

    #[test]
    fn zero_row_with_one_rhs_conflicts() {
        let mut st = RrefState::new(3);
        assert_eq!(st.append(&bv("000"), true).unwrap(), Append::Conflict);
        assert_eq!(st.append(&bv("000"), false).unwrap(), Append::Redundant);
    }

    #[test]
    fn wrong_width_rejected() {
        let mut st = RrefState::new(3);
        assert!(st.append(&bv("10"), true).is_err());
    }
}
