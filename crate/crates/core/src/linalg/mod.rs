//! Dense exact linear algebra over a [`FieldSpec`].

mod sparse;
mod subspace;

pub use sparse::SparseEchelon;
pub use subspace::Subspace;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// A dense row-major matrix whose entries all belong to one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols` and
    /// every entry must lie in `field`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::AmbientMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            check_field(field, &row)?;
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from integer rows.
    pub fn from_integers(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| field.from_integer(x)).collect()
            })
            .collect();
        Self::from_rows(field, cols, rows).expect("integer rows share the field")
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::AmbientMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            check_field(field, col)?;
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        debug_assert_eq!(value.field(), self.field);
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::AmbientMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        check_field(self.field, v)?;
        Ok(self.mul_vec_unchecked(v))
    }

    pub(crate) fn mul_vec_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        let nz: Vec<(usize, &Scalar)> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut acc = self.field.zero();
                for &(c, x) in &nz {
                    if !row[c].is_zero() {
                        acc = acc + &row[c] * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::AmbientMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::AmbientMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    /// Reduced row echelon form (same shape, zero rows last) and rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    /// Gauss-Jordan elimination; returns the rank.
    fn rref_in_place(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(found) = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(found, pivot_row);
            let inv = self.get(pivot_row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(pivot_row, c) * &inv;
                self.set(pivot_row, c, v);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let p = self.get(pivot_row, c);
                    if !p.is_zero() {
                        let v = self.get(r, c) - &(&factor * p);
                        self.set(r, c, v);
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, rank) = self.rref();
        let pivots: Vec<usize> = (0..rank)
            .map(|i| {
                (0..self.cols)
                    .find(|&c| !r.get(i, c).is_zero())
                    .expect("nonzero rref row")
            })
            .collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, basis).expect("kernel vectors have the right shape")
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::AmbientMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(found) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if found != col {
                m.swap_rows(found, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det * &pivot;
            let inv = pivot.inv()?;
            for r in col + 1..n {
                let factor = m.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &(&factor * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::AmbientMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let rank = aug.rref_in_place();
        if rank < n || (0..n).any(|i| !aug.get(i, i).is_one()) {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

/// Serialized as a list of rows of exact scalar strings.
impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[Scalar]> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.serialize(serializer)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format!("{:>width$}", cells[r * self.cols + c]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn check_field(field: FieldSpec, v: &[Scalar]) -> Result<()> {
    match v.iter().find(|x| x.field() != field) {
        Some(x) => Err(Error::FieldMismatch {
            left: field,
            right: x.field(),
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_len(expected: usize, v: &[Scalar]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::AmbientMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// `e_i` in `F^n`.
pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::RATIONALS;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id = Matrix::identity(Q, 2);
        assert_eq!(id.rref(), (id.clone(), 2));
    }

    #[test]
    fn rref_dependent_rows() {
        let m = Matrix::from_integers(Q, &[&[2, 4], &[1, 2]]);
        assert_eq!(m.rref(), (Matrix::from_integers(Q, &[&[1, 2], &[0, 0]]), 1));
    }

    #[test]
    fn rref_mod_two() {
        // Subtracting row 1 from row 2 leaves (0, 1); then clear above.
        let m = Matrix::from_integers(gf(2), &[&[1, 1], &[1, 2]]);
        assert_eq!(m.rref(), (Matrix::identity(gf(2), 2), 2));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(Q, 2, 2).kernel(), Subspace::full(Q, 2));
        assert_eq!(Matrix::identity(Q, 3).kernel(), Subspace::zero(Q, 3));
        let k = Matrix::from_integers(Q, &[&[1, 1]]).kernel();
        let expected = Subspace::span(Q, 2, vec![vec![Q.from_integer(1), Q.from_integer(-1)]]).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_integers(Q, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), Q.one());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Q, 2));
        let singular = Matrix::from_integers(gf(3), &[&[1, 2], &[2, 1]]);
        assert!(singular.determinant().unwrap().is_zero());
        assert_eq!(singular.inverse(), Err(Error::Singular));
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let m = Matrix::identity(Q, 2);
        assert!(matches!(m.mul_vec(&[Q.one()]), Err(Error::AmbientMismatch { .. })));
        assert!(matches!(
            m.mul(&Matrix::identity(gf(3), 2)),
            Err(Error::FieldMismatch { .. })
        ));
    }
}
