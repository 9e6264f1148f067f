//! Lie algebras given by structure constants, and their ideals.
//!
//! Basis indices are 0-based in the API; file formats and human-readable
//! reports use 1-based `e1, e2, ...`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_field, check_len, is_zero_vector, unit_vector, Matrix, Subspace};
use crate::scalar::{FieldSpec, Scalar};

/// First failure of the Lie axioms found by [`LieAlgebra::validate`].
/// Indices are 0-based; `Display` prints them 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `[e_i, e_i] != 0`.
    Alternating { i: usize },
    /// `c[j][i][k] != -c[i][j][k]`.
    Antisymmetry { i: usize, j: usize, k: usize },
    /// Jacobi identity fails on `(e_i, e_j, e_l)`.
    Jacobi { i: usize, j: usize, l: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Alternating { i } => write!(f, "[e{0}, e{0}] is not zero", i + 1),
            Violation::Antisymmetry { i, j, k } => write!(
                f,
                "antisymmetry fails at ({}, {}): coefficient of e{} in [e{}, e{}] and [e{}, e{}] do not cancel",
                i + 1,
                j + 1,
                k + 1,
                i + 1,
                j + 1,
                j + 1,
                i + 1
            ),
            Violation::Jacobi { i, j, l } => {
                write!(f, "Jacobi identity fails on (e{}, e{}, e{})", i + 1, j + 1, l + 1)
            }
        }
    }
}

/// A finite-dimensional Lie algebra: `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    field: FieldSpec,
    dim: usize,
    label: String,
    table: Vec<Scalar>,
    // nonzero (k, c[i][j][k]) for the pair at index i * dim + j
    sparse: Vec<Vec<(usize, Scalar)>>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.table == other.table
    }
}

impl Eq for LieAlgebra {}

impl LieAlgebra {
    /// Builds and validates an algebra from a dense table indexed
    /// `(i * dim + j) * dim + k`.
    pub fn new(field: FieldSpec, dim: usize, table: Vec<Scalar>) -> Result<Self> {
        let alg = Self::new_unvalidated(field, dim, table)?;
        alg.validate().map_err(Error::InvalidAlgebra)?;
        Ok(alg)
    }

    /// Like [`LieAlgebra::new`] but skips the axiom check; use
    /// [`LieAlgebra::validate`] to inspect the table.
    pub fn new_unvalidated(field: FieldSpec, dim: usize, table: Vec<Scalar>) -> Result<Self> {
        check_len(dim * dim * dim, &table)?;
        check_field(field, &table)?;
        let sparse = (0..dim * dim)
            .map(|pair| {
                (0..dim)
                    .filter_map(|k| {
                        let c = &table[pair * dim + k];
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        Ok(LieAlgebra {
            field,
            dim,
            label: String::new(),
            table,
            sparse,
        })
    }

    pub fn builder(field: FieldSpec, dim: usize) -> LieAlgebraBuilder {
        LieAlgebraBuilder {
            field,
            dim,
            table: vec![field.zero(); dim * dim * dim],
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c[i][j][k]`, the coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero terms `(k, c[i][j][k])` of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.sparse[i * self.dim + j]
    }

    /// Checks alternation, antisymmetry and the Jacobi identity on basis
    /// elements, reporting the first failure in index order.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.dim;
        for i in 0..n {
            if !self.basis_bracket(i, i).is_empty() {
                return Err(Violation::Alternating { i });
            }
            for j in i + 1..n {
                for k in 0..n {
                    let sum = self.structure_constant(i, j, k) + self.structure_constant(j, i, k);
                    if !sum.is_zero() {
                        return Err(Violation::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let ei = unit_vector(self.field, n, i);
                    let ej = unit_vector(self.field, n, j);
                    let el = unit_vector(self.field, n, l);
                    let a = self.bracket_unchecked(&self.bracket_unchecked(&ei, &ej), &el);
                    let b = self.bracket_unchecked(&self.bracket_unchecked(&ej, &el), &ei);
                    let c = self.bracket_unchecked(&self.bracket_unchecked(&el, &ei), &ej);
                    let total: Vec<Scalar> = a.iter().zip(&b).zip(&c).map(|((x, y), z)| x + y + z).collect();
                    if !is_zero_vector(&total) {
                        return Err(Violation::Jacobi { i, j, l });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        check_len(self.dim, v)?;
        check_field(self.field, v)
    }

    fn check_subspace(&self, a: &Subspace) -> Result<()> {
        if a.ambient_dim() != self.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: a.ambient_dim(),
            });
        }
        if a.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: a.field(),
            });
        }
        Ok(())
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.field, self.dim, i)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn full_subspace(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        let ys: Vec<(usize, &Scalar)> = y.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let terms = self.basis_bracket(i, j);
                if terms.is_empty() {
                    continue;
                }
                let coeff = xi * yj;
                for (k, c) in terms {
                    out[*k] = &out[*k] + &(&coeff * c);
                }
            }
        }
        out
    }

    /// `[a, b]`: span of brackets of basis vectors.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check_subspace(a)?;
        self.check_subspace(b)?;
        Ok(self.bracket_spaces_unchecked(a, b))
    }

    pub(crate) fn bracket_spaces_unchecked(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = self.zero_subspace();
        let same = a == b;
        for (s, u) in a.basis().iter().enumerate() {
            let start = if same { s + 1 } else { 0 };
            for v in &b.basis()[start..] {
                out.insert(self.bracket_unchecked(u, v));
                if out.is_full() {
                    return out;
                }
            }
        }
        out
    }

    /// `[a, L] ⊆ a`.
    pub fn is_ideal(&self, a: &Subspace) -> Result<bool> {
        self.check_subspace(a)?;
        Ok(self.is_ideal_unchecked(a))
    }

    pub(crate) fn is_ideal_unchecked(&self, a: &Subspace) -> bool {
        a.basis()
            .iter()
            .all(|u| (0..self.dim).all(|j| a.contains_unchecked(&self.bracket_with_basis(u, j))))
    }

    /// `[x, e_j]`.
    fn bracket_with_basis(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in self.basis_bracket(i, j) {
                out[*k] = &out[*k] + &(xi * c);
            }
        }
        out
    }

    /// Smallest ideal containing `s`.
    pub(crate) fn ideal_closure_space(&self, s: &Subspace) -> Subspace {
        let mut space = self.zero_subspace();
        let mut pending: Vec<Vec<Scalar>> = s.basis().to_vec();
        while let Some(v) = pending.pop() {
            if space.is_full() {
                break;
            }
            if !space.insert(v.clone()) {
                continue;
            }
            for j in 0..self.dim {
                let w = self.bracket_with_basis(&v, j);
                if !is_zero_vector(&w) && !space.contains_unchecked(&w) {
                    pending.push(w);
                }
            }
        }
        space
    }

    /// `a, [a,a], [[a,a],[a,a]], ...`, stopping at the first term that is
    /// zero or equal to its predecessor (that term is included). Never
    /// longer than `dim + 2` terms.
    pub fn derived_series(&self, a: &Subspace) -> Result<Vec<Subspace>> {
        self.check_subspace(a)?;
        Ok(self.derived_series_unchecked(a))
    }

    pub(crate) fn derived_series_unchecked(&self, a: &Subspace) -> Vec<Subspace> {
        let mut series = vec![a.clone()];
        let mut current = a.clone();
        for _ in 0..=self.dim {
            if current.is_zero() {
                break;
            }
            let next = self.bracket_spaces_unchecked(&current, &current);
            let stable = next == current;
            series.push(next.clone());
            if stable {
                break;
            }
            current = next;
        }
        series
    }

    /// Least `k` with `a^(k) = 0`, or `None` when the series stabilizes at
    /// a nonzero term.
    pub fn derived_length(&self, a: &Subspace) -> Result<Option<usize>> {
        self.check_subspace(a)?;
        Ok(self.derived_length_unchecked(a))
    }

    pub(crate) fn derived_length_unchecked(&self, a: &Subspace) -> Option<usize> {
        let series = self.derived_series_unchecked(a);
        let last = series.last().expect("series is never empty");
        last.is_zero().then(|| series.len() - 1)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_length_unchecked(&self.full_subspace()).is_some()
    }

    /// Matrix of `y -> [x, y]`; column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Result<Matrix> {
        self.check_vector(x)?;
        let columns: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| self.bracket_unchecked(x, &self.basis_vector(j)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &columns)
    }

    /// `{x : [x, e_i] = 0 for all i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        // Row (i, k): sum_j x_j c[j][i][k] = 0.
        let mut system = Matrix::zeros(self.field, n * n, n);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.basis_bracket(j, i) {
                    system.set(i * n + k, j, c.clone());
                }
            }
        }
        system.kernel()
    }

    /// `kappa(e_i, e_j) = trace(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> Matrix {
        let ads: Vec<Matrix> = (0..self.dim)
            .map(|i| self.ad_matrix(&self.basis_vector(i)).expect("basis vector fits"))
            .collect();
        let mut kappa = Matrix::zeros(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let t = ads[i].mul(&ads[j]).expect("square matrices").trace();
                kappa.set(i, j, t.clone());
                kappa.set(j, i, t);
            }
        }
        kappa
    }
}

/// Fills a structure-constant table one bracket at a time; `[e_j, e_i]` is
/// set to the negative automatically.
#[derive(Clone, Debug)]
pub struct LieAlgebraBuilder {
    field: FieldSpec,
    dim: usize,
    table: Vec<Scalar>,
}

impl LieAlgebraBuilder {
    /// Sets `[e_i, e_j] = sum c * e_k` over `terms = [(c, k), ...]`
    /// (0-based indices).
    pub fn bracket(mut self, i: usize, j: usize, terms: &[(i64, usize)]) -> Self {
        let scalars: Vec<(Scalar, usize)> = terms.iter().map(|&(c, k)| (self.field.from_integer(c), k)).collect();
        self.set(i, j, &scalars);
        self
    }

    pub fn set(&mut self, i: usize, j: usize, terms: &[(Scalar, usize)]) {
        let n = self.dim;
        for k in 0..n {
            self.table[(i * n + j) * n + k] = self.field.zero();
            self.table[(j * n + i) * n + k] = self.field.zero();
        }
        for (c, k) in terms {
            let at = (i * n + j) * n + k;
            self.table[at] = &self.table[at] + c;
        }
        for k in 0..n {
            let v = -&self.table[(i * n + j) * n + k];
            self.table[(j * n + i) * n + k] = v;
        }
    }

    pub fn build(self) -> Result<LieAlgebra> {
        LieAlgebra::new(self.field, self.dim, self.table)
    }

    pub fn build_unvalidated(self) -> Result<LieAlgebra> {
        LieAlgebra::new_unvalidated(self.field, self.dim, self.table)
    }
}

/// A subspace verified to be an ideal of a specific algebra.
#[derive(Clone, Debug)]
pub struct IdealHandle {
    algebra: Arc<LieAlgebra>,
    space: Subspace,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra) && self.space == other.space
    }
}

impl IdealHandle {
    /// Fails with `NotAnIdeal` unless `[space, L] ⊆ space`.
    pub fn new(algebra: &Arc<LieAlgebra>, space: Subspace) -> Result<Self> {
        if !algebra.is_ideal(&space)? {
            return Err(Error::NotAnIdeal);
        }
        Ok(IdealHandle {
            algebra: Arc::clone(algebra),
            space,
        })
    }

    pub fn zero(algebra: &Arc<LieAlgebra>) -> Self {
        IdealHandle {
            algebra: Arc::clone(algebra),
            space: algebra.zero_subspace(),
        }
    }

    pub fn full(algebra: &Arc<LieAlgebra>) -> Self {
        IdealHandle {
            algebra: Arc::clone(algebra),
            space: algebra.full_subspace(),
        }
    }

    /// Smallest ideal containing `s`.
    pub fn closure(algebra: &Arc<LieAlgebra>, s: &Subspace) -> Result<Self> {
        algebra.check_subspace(s)?;
        Ok(IdealHandle {
            algebra: Arc::clone(algebra),
            space: algebra.ideal_closure_space(s),
        })
    }

    /// Smallest ideal containing the vector `x`.
    pub fn generated_by(algebra: &Arc<LieAlgebra>, x: &[Scalar]) -> Result<Self> {
        algebra.check_vector(x)?;
        let s = Subspace::span(algebra.field, algebra.dim, [x.to_vec()])?;
        Self::closure(algebra, &s)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Derived series; every term is again an ideal of the algebra.
    pub fn derived_series(&self) -> Vec<IdealHandle> {
        self.algebra
            .derived_series_unchecked(&self.space)
            .into_iter()
            .map(|space| IdealHandle {
                algebra: Arc::clone(&self.algebra),
                space,
            })
            .collect()
    }

    /// `I^(k)`.
    pub fn derived_term(&self, k: usize) -> IdealHandle {
        let series = self.algebra.derived_series_unchecked(&self.space);
        let space = series
            .get(k)
            .unwrap_or_else(|| series.last().expect("nonempty"))
            .clone();
        IdealHandle {
            algebra: Arc::clone(&self.algebra),
            space,
        }
    }

    pub fn derived_length(&self) -> Option<usize> {
        self.algebra.derived_length_unchecked(&self.space)
    }

    /// Sum of two ideals of the same algebra.
    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) && self.algebra != other.algebra {
            return Err(Error::InvalidParameter("ideals of different algebras".into()));
        }
        Ok(IdealHandle {
            algebra: Arc::clone(&self.algebra),
            space: self.space.sum(&other.space)?,
        })
    }
}
