use std::fmt;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Builds a matrix from rows of equal length. A matrix with no rows has
    /// `cols` taken from the argument.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * rhs.get(k, j);
                    out.data[i * rhs.cols + j] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse; first nonzero entry in each column is the pivot.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                a.sub_row_multiple(r, col, &factor);
                inv.sub_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut span = Span::new(self.cols);
        for r in 0..self.rows {
            span.insert(self.row(r).to_vec()).expect("row length matches");
        }
        span.rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, by: &Rational) {
        for c in 0..self.cols {
            self.data[r * self.cols + c] *= by;
        }
    }

    // row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        for c in 0..self.cols {
            let delta = factor * &self.data[source * self.cols + c];
            self.data[target * self.cols + c] -= delta;
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained row space in reduced row echelon form.
///
/// Pivots are always the first nonzero column of a reduced vector, and every
/// stored row is fully reduced against the others, so the stored basis
/// depends only on the span and not on insertion order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Span {
    cols: usize,
    // (pivot column, row) sorted by pivot
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    pub fn new(cols: usize) -> Self {
        Span {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Rational]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    /// Residual of `v` after elimination against the stored rows; zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(v.len())?;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &factor * b;
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Zero::is_zero))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> Result<bool> {
        let mut v = self.reduce(&v)?;
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return Ok(false);
        };
        let inv = v[pivot].recip();
        for c in v.iter_mut() {
            *c *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (a, b) in row.iter_mut().zip(&v) {
                if !b.is_zero() {
                    *a -= &factor * b;
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v));
        Ok(true)
    }

    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.rows.iter().map(|(_, r)| r.clone()).collect(), self.cols)
            .expect("rows share the span width")
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: len,
            });
        }
        Ok(())
    }
}

/// Functional form of [`Span::insert`]: the reduced basis of
/// `span(basis ∪ {v})` and whether `v` was outside the old span.
pub fn span_insert(basis: &RatMatrix, v: &[Rational]) -> Result<(RatMatrix, bool)> {
    let mut span = Span::new(basis.cols());
    for r in 0..basis.rows() {
        span.insert(basis.row(r).to_vec())?;
    }
    let was_new = span.insert(v.to_vec())?;
    Ok((span.to_matrix(), was_new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn span_insert_examples() {
        let empty = RatMatrix::zeros(0, 2);
        let (b, new) = span_insert(&empty, &ints(&[0, 0])).unwrap();
        assert!(!new);
        assert_eq!(b.rows(), 0);

        let (b, new) = span_insert(&empty, &ints(&[1, 0])).unwrap();
        assert!(new);
        assert_eq!(b, RatMatrix::from_rows(vec![ints(&[1, 0])], 2).unwrap());

        let one_one = RatMatrix::from_rows(vec![ints(&[1, 1])], 2).unwrap();
        let (b, new) = span_insert(&one_one, &ints(&[2, 2])).unwrap();
        assert!(!new);
        assert_eq!(b, one_one);
    }

    #[test]
    fn span_insert_rejects_wrong_length() {
        let empty = RatMatrix::zeros(0, 2);
        assert_eq!(
            span_insert(&empty, &ints(&[1, 2, 3])),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_rows(vec![ints(&[2, 1]), ints(&[1, 1])], 2).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        let sing = RatMatrix::from_rows(vec![ints(&[1, 2]), ints(&[2, 4])], 2).unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn reduced_form_is_canonical() {
        let mut a = Span::new(3);
        a.insert(ints(&[1, 2, 3])).unwrap();
        a.insert(ints(&[0, 1, 1])).unwrap();
        let mut b = Span::new(3);
        b.insert(ints(&[1, 3, 4])).unwrap();
        b.insert(ints(&[2, 4, 6])).unwrap();
        b.insert(ints(&[0, 2, 2])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pivots(), vec![0, 1]);
        assert_eq!(a.basis().next().unwrap(), &[int(1), int(0), int(1)][..]);
        assert!(a.contains(&[rat(1, 2), int(0), rat(1, 2)]).unwrap());
    }

    fn vec3() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-5i64..5).prop_map(int), 3)
    }

    proptest! {
        #[test]
        fn insert_is_idempotent(vs in prop::collection::vec(vec3(), 0..4), v in vec3()) {
            let mut s = Span::new(3);
            for w in vs {
                s.insert(w).unwrap();
            }
            let before = s.rank();
            let grew = s.insert(v.clone()).unwrap();
            prop_assert_eq!(s.rank(), before + usize::from(grew));
            let snapshot = s.clone();
            prop_assert!(!s.insert(v).unwrap());
            prop_assert_eq!(s, snapshot);
        }

        #[test]
        fn order_independent(vs in prop::collection::vec(vec3(), 0..5)) {
            let mut a = Span::new(3);
            for w in &vs {
                a.insert(w.clone()).unwrap();
            }
            let mut b = Span::new(3);
            for w in vs.iter().rev() {
                b.insert(w.clone()).unwrap();
            }
            prop_assert_eq!(a, b);
        }
    }
}
