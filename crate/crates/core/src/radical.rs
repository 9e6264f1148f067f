//! The solvable radical `S(L)` (the sum of all solvable ideals) and
//! characteristic ideals.
//!
//! Only finite-dimensional algebras are handled; there `S(L)` is the
//! largest solvable ideal, and a vector lies in it exactly when the ideal
//! it generates is solvable.

use std::sync::Arc;

use serde::Serialize;

use crate::derivation::derivation_algebra;
use crate::error::{Error, Result};
use crate::liealg::{IdealHandle, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Default enumeration budget for [`radical_bruteforce`].
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RadicalMethod {
    KillingChar0,
    BruteForceMembership,
}

/// A derivation `D` and a vector `v` of an ideal with `D v` outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Index of `derivation` in the derivation-algebra basis.
    pub derivation_index: usize,
    pub derivation: Matrix,
    pub vector: Vec<Scalar>,
    pub image: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct RadicalReport {
    pub radical: IdealHandle,
    pub method: RadicalMethod,
    pub derived_len: usize,
    pub characteristic: bool,
    pub witness: Option<Witness>,
}

/// Whether the ideal generated by `x` is solvable, i.e. `x ∈ S(L)`.
pub fn generates_solvable_ideal(algebra: &Arc<LieAlgebra>, x: &[Scalar]) -> Result<bool> {
    Ok(IdealHandle::generated_by(algebra, x)?.derived_length().is_some())
}

/// `S(L) = {x : kappa(x, y) = 0 for all y in [L, L]}` over `Q`.
pub fn radical_char0(algebra: &Arc<LieAlgebra>) -> Result<IdealHandle> {
    if !algebra.field().is_rationals() {
        return Err(Error::WrongCharacteristic(format!(
            "the Killing-form criterion needs characteristic 0, got {}",
            algebra.field()
        )));
    }
    let full = algebra.full_subspace();
    let derived = algebra.bracket_spaces(&full, &full)?;
    let kappa = algebra.killing_form();
    let rows: Vec<Vec<Scalar>> = derived
        .basis()
        .iter()
        .map(|b| kappa.mul_vec(b))
        .collect::<Result<_>>()?;
    let space = if rows.is_empty() {
        full
    } else {
        Matrix::from_rows(algebra.field(), algebra.dim(), rows)?.kernel()
    };
    let radical =
        IdealHandle::new(algebra, space).map_err(|_| Error::Inconsistent("Killing radical is not an ideal".into()))?;
    if radical.derived_length().is_none() {
        return Err(Error::Inconsistent("Killing radical is not solvable".into()));
    }
    Ok(radical)
}

/// Number of vectors `p^dim` an enumeration over `GF(p)^dim` touches.
pub fn enumeration_cost(algebra: &LieAlgebra) -> Option<u128> {
    let p = algebra.field().modulus()? as u128;
    u32::try_from(algebra.dim()).ok().and_then(|d| p.checked_pow(d))
}

/// `S(L)` over `GF(p)` by testing one representative of every projective
/// point (first nonzero coordinate 1) and summing the solvable ideals
/// found. Points already inside the running sum are skipped: they lie in
/// a solvable ideal and add nothing.
pub fn radical_bruteforce(algebra: &Arc<LieAlgebra>, budget: u128) -> Result<IdealHandle> {
    let field = algebra.field();
    let Some(p) = field.modulus() else {
        return Err(Error::WrongCharacteristic(
            "enumeration needs a finite field; use the Killing criterion over Q".into(),
        ));
    };
    let required = enumeration_cost(algebra).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let n = algebra.dim();
    let mut radical = algebra.zero_subspace();
    let mut digits = vec![0u64; n];
    for lead in (0..n).rev() {
        // Vectors (0, ..., 0, 1, *, ..., *) with the 1 at `lead`.
        let tail = n - lead - 1;
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            let mut v = algebra.zero_vector();
            v[lead] = field.one();
            for t in 0..tail {
                v[lead + 1 + t] = field.from_integer(digits[t] as i64);
            }
            if !radical.contains_unchecked(&v) {
                let closure = algebra.ideal_closure_space(&Subspace::span(field, n, [v])?);
                if algebra.derived_length_unchecked(&closure).is_some() {
                    radical = radical.sum(&closure)?;
                }
            }
            if !increment(&mut digits[..tail], p) {
                break;
            }
        }
    }
    let radical = IdealHandle::new(algebra, radical)
        .map_err(|_| Error::Inconsistent("sum of solvable ideals is not an ideal".into()))?;
    if radical.derived_length().is_none() {
        return Err(Error::Inconsistent("sum of solvable ideals is not solvable".into()));
    }
    Ok(radical)
}

fn increment(digits: &mut [u64], base: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// `S(L)`: the Killing criterion over `Q`, enumeration over `GF(p)`.
pub fn solvable_radical(algebra: &Arc<LieAlgebra>, budget: u128) -> Result<(IdealHandle, RadicalMethod)> {
    if algebra.field().is_rationals() {
        Ok((radical_char0(algebra)?, RadicalMethod::KillingChar0))
    } else {
        Ok((
            radical_bruteforce(algebra, budget)?,
            RadicalMethod::BruteForceMembership,
        ))
    }
}

/// Result of [`is_characteristic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicVerdict {
    pub characteristic: bool,
    pub witness: Option<Witness>,
    /// Dimension of the derivation algebra that was tested.
    pub der_dim: usize,
}

/// Whether `D(I) ⊆ I` for every derivation `D`. Checking a basis of
/// `Der(L)` suffices by linearity. The witness, if any, is the first basis
/// derivation and the first basis vector of the ideal that escape.
pub fn is_characteristic(ideal: &IdealHandle) -> CharacteristicVerdict {
    let basis = derivation_algebra(ideal.algebra());
    is_characteristic_with(ideal, &basis)
}

/// As [`is_characteristic`], against a precomputed basis of `Der(L)`.
pub fn is_characteristic_with(ideal: &IdealHandle, der_basis: &[Matrix]) -> CharacteristicVerdict {
    let space = ideal.space();
    for (index, d) in der_basis.iter().enumerate() {
        for v in space.basis() {
            let image = d.mul_vec_unchecked(v);
            if !space.contains_unchecked(&image) {
                return CharacteristicVerdict {
                    characteristic: false,
                    witness: Some(Witness {
                        derivation_index: index,
                        derivation: d.clone(),
                        vector: v.clone(),
                        image,
                    }),
                    der_dim: der_basis.len(),
                };
            }
        }
    }
    CharacteristicVerdict {
        characteristic: true,
        witness: None,
        der_dim: der_basis.len(),
    }
}

/// Checks a witness from scratch: `v ∈ I`, `D v ∉ I`, `D ∈ Der(L)`.
pub fn verify_witness(ideal: &IdealHandle, witness: &Witness) -> Result<bool> {
    let algebra = ideal.algebra();
    let is_der = crate::derivation::is_derivation(algebra, &witness.derivation)?;
    let image = witness.derivation.mul_vec(&witness.vector)?;
    Ok(is_der
        && image == witness.image
        && ideal.space().contains(&witness.vector)?
        && !ideal.space().contains(&image)?)
}

/// Radical, its derived length, and its characteristicity.
pub fn analyze(algebra: &Arc<LieAlgebra>, budget: u128) -> Result<RadicalReport> {
    let (radical, method) = solvable_radical(algebra, budget)?;
    let derived_len = radical
        .derived_length()
        .ok_or_else(|| Error::Inconsistent("radical is not solvable".into()))?;
    let verdict = is_characteristic(&radical);
    Ok(RadicalReport {
        radical,
        method,
        derived_len,
        characteristic: verdict.characteristic,
        witness: verdict.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{abelian, affine_line, direct_sum, heisenberg, jacobson, sl2};
    use crate::scalar::FieldSpec;

    const Q: FieldSpec = FieldSpec::RATIONALS;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = Arc::new(sl2(Q).unwrap());
        assert!(generates_solvable_ideal(&s, &s.zero_vector()).unwrap());
        assert!(!generates_solvable_ideal(&s, &s.basis_vector(0)).unwrap());
        let sum = direct_sum(&sl2(Q).unwrap(), &abelian(1, Q).unwrap()).unwrap();
        assert!(generates_solvable_ideal(&sum.algebra, &sum.algebra.basis_vector(3)).unwrap());
        assert_eq!(
            IdealHandle::generated_by(&sum.algebra, &sum.algebra.basis_vector(3)).unwrap(),
            sum.second
        );
    }

    #[test]
    fn killing_radical_examples() {
        let a = Arc::new(abelian(3, Q).unwrap());
        assert!(radical_char0(&a).unwrap().space().is_full());
        let s = Arc::new(sl2(Q).unwrap());
        assert!(radical_char0(&s).unwrap().space().is_zero());
        let b = Arc::new(affine_line(Q).unwrap());
        assert!(radical_char0(&b).unwrap().space().is_full());
        let sh = direct_sum(&sl2(Q).unwrap(), &heisenberg(Q).unwrap()).unwrap();
        assert_eq!(radical_char0(&sh.algebra).unwrap(), sh.second);
        assert!(matches!(
            radical_char0(&Arc::new(sl2(gf(5)).unwrap())),
            Err(Error::WrongCharacteristic(_))
        ));
    }

    #[test]
    fn bruteforce_examples() {
        let a = Arc::new(abelian(2, gf(3)).unwrap());
        assert!(radical_bruteforce(&a, DEFAULT_BUDGET).unwrap().space().is_full());
        let s = Arc::new(sl2(gf(5)).unwrap());
        assert!(radical_bruteforce(&s, DEFAULT_BUDGET).unwrap().space().is_zero());
        assert_eq!(
            radical_bruteforce(&s, 10),
            Err(Error::BudgetExceeded {
                required: 125,
                budget: 10
            })
        );
        assert!(matches!(
            radical_bruteforce(&Arc::new(sl2(Q).unwrap()), DEFAULT_BUDGET),
            Err(Error::WrongCharacteristic(_))
        ));
    }

    #[test]
    fn characteristic_examples() {
        let sh = direct_sum(&sl2(Q).unwrap(), &heisenberg(Q).unwrap()).unwrap();
        let alg = &sh.algebra;
        assert!(is_characteristic(&IdealHandle::zero(alg)).characteristic);
        assert!(is_characteristic(&IdealHandle::full(alg)).characteristic);
        let report = analyze(alg, DEFAULT_BUDGET).unwrap();
        assert!(report.characteristic);
        assert_eq!(report.derived_len, 2);
        assert_eq!(report.method, RadicalMethod::KillingChar0);
    }

    #[test]
    fn jacobson_radical_is_not_characteristic() {
        let c = jacobson(3).unwrap();
        let verdict = is_characteristic(&c.radical);
        assert!(!verdict.characteristic);
        let w = verdict.witness.unwrap();
        assert!(verify_witness(&c.radical, &w).unwrap());
        let found = radical_bruteforce(&c.algebra, DEFAULT_BUDGET).unwrap();
        assert_eq!(found, c.radical);
    }

    #[test]
    fn increments_like_an_odometer() {
        let mut d = vec![0u64; 2];
        let mut seen = 1;
        while increment(&mut d, 3) {
            seen += 1;
        }
        assert_eq!(seen, 9);
    }
}
