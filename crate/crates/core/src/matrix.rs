//! Dense exact integer matrices and Smith normal form.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Columns `range` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        let mut b = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                b[(i, j - start)] = self[(i, j)].clone();
            }
        }
        b
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `left · input · right == diagonal`, with `left` and `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the smallest-magnitude nonzero entry in the trailing block
/// starting at `(k, k)`; ties go to the first position in row-major order.
fn smallest_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form over the integers.
///
/// Diagonal entries are nonnegative and satisfy `d[0] | d[1] | ...`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut left = IntMatrix::identity(m.rows);
    let mut right = IntMatrix::identity(m.cols);
    let steps = m.rows.min(m.cols);

    for k in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_pivot(&a, k) else {
                return finish(a, left, right);
            };
            a.swap_rows(k, pi);
            left.swap_rows(k, pi);
            a.swap_cols(k, pj);
            right.swap_cols(k, pj);

            let pivot = a[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..a.rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = -a[(i, k)].div_floor(&pivot);
                a.add_row_multiple(i, k, &q);
                left.add_row_multiple(i, k, &q);
                clean &= a[(i, k)].is_zero();
            }
            for j in k + 1..a.cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = -a[(k, j)].div_floor(&pivot);
                a.add_col_multiple(j, k, &q);
                right.add_col_multiple(j, k, &q);
                clean &= a[(k, j)].is_zero();
            }
            if !clean {
                // a nonzero remainder is now smaller than the pivot
                continue;
            }
            let offending = (k + 1..a.rows)
                .find(|&i| (k + 1..a.cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(k, i, &one);
                    left.add_row_multiple(k, i, &one);
                }
                None => {
                    if pivot.is_negative() {
                        a.negate_row(k);
                        left.negate_row(k);
                    }
                    break;
                }
            }
        }
    }
    finish(a, left, right)
}

fn finish(diagonal: IntMatrix, left: IntMatrix, right: IntMatrix) -> SmithForm {
    SmithForm {
        diagonal,
        left,
        right,
    }
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal);
        assert!(s.diagonal.is_diagonal());
        assert_eq!(s.left.determinant().abs(), BigInt::one());
        assert_eq!(s.right.determinant().abs(), BigInt::one());
        let d = s.diagonal.diagonal();
        for w in d.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]), "{d:?}");
        }
        assert!(d.iter().all(|x| !x.is_negative()));
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal, IntMatrix::identity(2));
    }

    #[test]
    fn two_four_six_eight() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal.diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(3, 2));
        assert!(s.diagonal.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 2));
        check(&IntMatrix::zeros(2, 0));
        check(&IntMatrix::zeros(0, 0));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) has invariant factors (1, 6)
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal.diagonal(), ints(&[1, 6]));
    }

    #[test]
    fn rectangular() {
        let s = check(&IntMatrix::from_rows(&[vec![0, 1, -1], vec![1, 0, 2]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 1]));
        let s = check(&IntMatrix::from_rows(&[vec![4], vec![6], vec![-10]]));
        assert_eq!(s.invariant_factors(), ints(&[2]));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(
            IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant(),
            BigInt::from(-2)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }
}
