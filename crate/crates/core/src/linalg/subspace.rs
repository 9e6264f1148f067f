use serde::Serialize;

use super::{check_field, check_len, is_zero_vector, unit_vector, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// A subspace of `F^n`, held by its reduced row echelon basis.
///
/// The basis has no zero rows, pivots strictly increase, every pivot is 1
/// and every pivot column is zero outside its pivot row. Since the RREF of
/// a row space is unique, two subspaces are equal exactly when their
/// representations are; the derived `PartialEq` is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: (0..ambient).map(|i| unit_vector(field, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<I>(field: FieldSpec, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            check_len(ambient, &v)?;
            check_field(field, &v)?;
            s.insert(v);
        }
        Ok(s)
    }

    /// Span of `e_i` for the given 0-based indices.
    pub fn coordinate(field: FieldSpec, ambient: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= ambient) {
            return Err(Error::AmbientMismatch {
                expected: ambient,
                found: bad + 1,
            });
        }
        Self::span(field, ambient, indices.iter().map(|&i| unit_vector(field, ambient, i)))
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        Self::span(m.field(), m.cols(), m.row_iter().map(<[Scalar]>::to_vec)).expect("rows share the matrix shape")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Canonical basis vectors, ordered by pivot column.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The basis as a `dim x ambient` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.ambient, self.rows.clone()).expect("basis rows are well formed")
    }

    /// Unit vectors at the non-pivot columns: a basis of a complement.
    pub fn complement_basis(&self) -> Vec<Vec<Scalar>> {
        (0..self.ambient)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .map(|c| unit_vector(self.field, self.ambient, c))
            .collect()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        check_len(self.ambient, v)?;
        check_field(self.field, v)
    }

    /// Remainder of `v` after elimination against the basis; zero iff
    /// `v` lies in the subspace.
    pub(crate) fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for c in p..self.ambient {
                if !row[c].is_zero() {
                    v[c] = &v[c] - &(&factor * &row[c]);
                }
            }
        }
        v
    }

    /// Adds `v` to the span, keeping the representation canonical.
    /// Returns whether the dimension grew.
    pub(crate) fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[lead].inv().expect("leading entry is nonzero");
        for x in &mut v[lead..] {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in &mut self.rows {
            if row[lead].is_zero() {
                continue;
            }
            let factor = row[lead].clone();
            for c in lead..self.ambient {
                if !v[c].is_zero() {
                    row[c] = &row[c] - &(&factor * &v[c]);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.rows.insert(at, v);
        self.pivots.insert(at, lead);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v.to_vec()))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let (mut big, small) = if self.dim() >= other.dim() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for v in &small.rows {
            big.insert(v.clone());
        }
        Ok(big)
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.dim() <= other.dim() && self.rows.iter().all(|v| other.contains_unchecked(v)))
    }

    /// Intersection, from the kernel of `[A^T | -B^T]`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        let r = self.dim();
        let mut columns: Vec<Vec<Scalar>> = self.rows.clone();
        columns.extend(other.rows.iter().map(|v| v.iter().map(|x| -x).collect()));
        let system = Matrix::from_columns(self.field, self.ambient, &columns)?;
        let kernel = system.kernel();
        let vectors = kernel.rows.iter().map(|coeffs| {
            let mut v = vec![self.field.zero(); self.ambient];
            for (alpha, row) in coeffs[..r].iter().zip(&self.rows) {
                if alpha.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x + &(alpha * y);
                }
            }
            v
        });
        Subspace::span(self.field, self.ambient, vectors)
    }

    /// Image under a square matrix: span of `m * v` over the basis.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient || m.cols() != self.ambient {
            return Err(Error::AmbientMismatch {
                expected: self.ambient,
                found: m.cols(),
            });
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: m.field(),
            });
        }
        Ok(self.image_unchecked(m))
    }

    pub(crate) fn image_unchecked(&self, m: &Matrix) -> Subspace {
        let mut out = Subspace::zero(self.field, self.ambient);
        for v in &self.rows {
            out.insert(m.mul_vec_unchecked(v));
            if out.is_full() {
                break;
            }
        }
        out
    }

    /// Basis rows rendered in scalar syntax.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    /// Parses rows in scalar syntax back into a (canonicalized) subspace.
    pub fn from_string_rows(field: FieldSpec, ambient: usize, rows: &[Vec<String>]) -> Result<Subspace> {
        let mut vectors = Vec::with_capacity(rows.len());
        for row in rows {
            let v = row.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>()?;
            vectors.push(v);
        }
        Subspace::span(field, ambient, vectors)
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(serializer)
    }
}
