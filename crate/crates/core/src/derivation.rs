//! Derivations of a Lie algebra as matrices, the derivation algebra, and
//! the ideals `J_k = I + D(I) + ... + D^k(I)`.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::liealg::{IdealHandle, LieAlgebra};
use crate::linalg::{check_field, check_len, Matrix, SparseEchelon, Subspace};
use crate::scalar::{FieldSpec, Scalar};

/// A linear map `D` with `D[x, y] = [Dx, y] + [x, Dy]`, stored as a matrix
/// whose column `j` is `D(e_j)`.
#[derive(Clone, Debug)]
pub struct DerivationMap {
    algebra: Arc<LieAlgebra>,
    matrix: Matrix,
}

impl DerivationMap {
    /// Checks the Leibniz rule on all basis pairs.
    pub fn new(algebra: &Arc<LieAlgebra>, matrix: Matrix) -> Result<Self> {
        if let Some((i, j)) = leibniz_defect(algebra, &matrix)? {
            return Err(Error::NotADerivation { i, j });
        }
        Ok(DerivationMap {
            algebra: Arc::clone(algebra),
            matrix,
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.matrix.mul_vec(v)
    }

    /// `D^m(a)`; `m = 0` returns `a`.
    pub fn power_image(&self, a: &Subspace, m: usize) -> Result<Subspace> {
        if a.ambient_dim() != self.algebra.dim() {
            return Err(Error::AmbientMismatch {
                expected: self.algebra.dim(),
                found: a.ambient_dim(),
            });
        }
        let mut current = a.clone();
        for _ in 0..m {
            if current.is_zero() {
                break;
            }
            current = current.image(&self.matrix)?;
        }
        Ok(current)
    }

    /// `D^m(v)`.
    pub fn power_apply(&self, v: &[Scalar], m: usize) -> Result<Vec<Scalar>> {
        let mut current = v.to_vec();
        for _ in 0..m {
            current = self.matrix.mul_vec(&current)?;
        }
        Ok(current)
    }
}

/// First basis pair `(i, j)`, `i < j`, on which the Leibniz rule fails.
pub fn leibniz_defect(algebra: &LieAlgebra, m: &Matrix) -> Result<Option<(usize, usize)>> {
    let n = algebra.dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::AmbientMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    if m.field() != algebra.field() {
        return Err(Error::FieldMismatch {
            left: algebra.field(),
            right: m.field(),
        });
    }
    let images: Vec<Vec<Scalar>> = (0..n).map(|j| m.column(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let ei = algebra.basis_vector(i);
            let ej = algebra.basis_vector(j);
            let lhs = m.mul_vec_unchecked(&algebra.bracket_unchecked(&ei, &ej));
            let a = algebra.bracket_unchecked(&images[i], &ej);
            let b = algebra.bracket_unchecked(&ei, &images[j]);
            let ok = lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y);
            if !ok {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Whether `m` is a derivation of `algebra`.
pub fn is_derivation(algebra: &LieAlgebra, m: &Matrix) -> Result<bool> {
    Ok(leibniz_defect(algebra, m)?.is_none())
}

/// Inner derivation `ad(x): y -> [x, y]`.
pub fn ad(algebra: &Arc<LieAlgebra>, x: &[Scalar]) -> Result<DerivationMap> {
    let matrix = algebra.ad_matrix(x)?;
    Ok(DerivationMap {
        algebra: Arc::clone(algebra),
        matrix,
    })
}

/// Position of the unknown `D[r][j]` in the Leibniz system: the matrix is
/// flattened column by column, so `j * n + r`.
pub fn unknown_index(n: usize, r: usize, j: usize) -> usize {
    j * n + r
}

/// A basis of `Der(L)`, as the solution space of the Leibniz conditions
/// on basis pairs.
///
/// For `i < j` and every output coordinate `r` the condition reads
/// `sum_k c[i][j][k] D[r][k] - sum_k c[k][j][r] D[k][i] + sum_k c[k][i][r] D[k][j] = 0`.
/// Unknowns are ordered by [`unknown_index`]; the basis is the canonical
/// (RREF) basis of the solution space in that ordering, so it does not
/// depend on the order in which equations are assembled.
pub fn derivation_algebra(algebra: &LieAlgebra) -> Vec<Matrix> {
    let n = algebra.dim();
    let field = algebra.field();
    // by_output[j][r] lists (k, c[k][j][r]).
    let mut by_output: Vec<Vec<Vec<(usize, Scalar)>>> = vec![vec![Vec::new(); n]; n];
    for k in 0..n {
        for j in 0..n {
            for (r, c) in algebra.basis_bracket(k, j) {
                by_output[j][*r].push((k, c.clone()));
            }
        }
    }
    let mut system = SparseEchelon::new(field, n * n);
    for i in 0..n {
        for j in i + 1..n {
            let pair = algebra.basis_bracket(i, j);
            for r in 0..n {
                let mut terms: Vec<(usize, Scalar)> = Vec::new();
                for (k, c) in pair {
                    terms.push((unknown_index(n, r, *k), c.clone()));
                }
                for (k, c) in &by_output[j][r] {
                    terms.push((unknown_index(n, *k, i), -c));
                }
                for (k, c) in &by_output[i][r] {
                    terms.push((unknown_index(n, *k, j), c.clone()));
                }
                if !terms.is_empty() {
                    system.push(terms);
                }
            }
        }
    }
    system.kernel().basis().iter().map(|v| unflatten(field, n, v)).collect()
}

fn unflatten(field: FieldSpec, n: usize, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for j in 0..n {
        for r in 0..n {
            m.set(r, j, v[unknown_index(n, r, j)].clone());
        }
    }
    m
}

/// Result of [`d_closure`].
#[derive(Clone, Debug)]
pub struct DClosure {
    /// `J_0, J_1, ...` up to the requested `k` or the first repeat.
    pub chain: Vec<IdealHandle>,
    /// Least `m < k` with `J_m = J_{m+1}`; then `J_j = J_m` for all `j >= m`.
    pub stabilized_at: Option<usize>,
}

impl DClosure {
    /// `J_k` for the requested `k`.
    pub fn ideal(&self) -> &IdealHandle {
        self.chain.last().expect("chain starts with I")
    }

    /// `J_m` for any `m`, using stabilization beyond the computed chain.
    pub fn term(&self, m: usize) -> &IdealHandle {
        self.chain.get(m).unwrap_or_else(|| self.ideal())
    }
}

/// `J_k = I + D(I) + ... + D^k(I)`, computed as `J_{m+1} = I + D(J_m)`.
/// Every term is checked to be an ideal.
pub fn d_closure(ideal: &IdealHandle, derivation: &DerivationMap, k: usize) -> Result<DClosure> {
    let algebra = ideal.algebra();
    if !Arc::ptr_eq(algebra, derivation.algebra()) && **algebra != **derivation.algebra() {
        return Err(Error::InvalidParameter(
            "ideal and derivation belong to different algebras".into(),
        ));
    }
    let mut chain = vec![ideal.clone()];
    let mut stabilized_at = None;
    let mut current = ideal.space().clone();
    for m in 0..k {
        let next = ideal.space().sum(&current.image(derivation.matrix())?)?;
        if next == current {
            stabilized_at = Some(m);
            break;
        }
        chain.push(
            IdealHandle::new(algebra, next.clone())
                .map_err(|_| Error::Inconsistent(format!("J_{} is not an ideal", m + 1)))?,
        );
        current = next;
    }
    Ok(DClosure { chain, stabilized_at })
}

/// Checks `D^k[x, y] = sum_s C(k, s) [D^s x, D^(k-s) y]` exactly.
/// Binomial coefficients are computed over the integers, then mapped into
/// the field.
pub fn leibniz_expand_check(derivation: &DerivationMap, x: &[Scalar], y: &[Scalar], k: usize) -> Result<bool> {
    let algebra = derivation.algebra();
    let n = algebra.dim();
    check_len(n, x)?;
    check_len(n, y)?;
    check_field(algebra.field(), x)?;
    check_field(algebra.field(), y)?;
    let field = algebra.field();
    let mut dx = vec![x.to_vec()];
    let mut dy = vec![y.to_vec()];
    for s in 0..k {
        dx.push(derivation.matrix().mul_vec_unchecked(&dx[s]));
        dy.push(derivation.matrix().mul_vec_unchecked(&dy[s]));
    }
    let lhs = derivation.power_apply(&algebra.bracket_unchecked(x, y), k)?;
    let mut rhs = algebra.zero_vector();
    for s in 0..=k {
        let c = num_integer::binomial(BigUint::from(k), BigUint::from(s));
        let c = field.from_bigint(&c.into());
        if c.is_zero() {
            continue;
        }
        let term = algebra.bracket_unchecked(&dx[s], &dy[k - s]);
        for (acc, t) in rhs.iter_mut().zip(&term) {
            *acc = &*acc + &(&c * t);
        }
    }
    Ok(lhs == rhs)
}
