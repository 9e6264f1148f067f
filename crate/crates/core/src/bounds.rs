//! Derived-length bounds for the ideals `J_k = I + D(I) + ... + D^k(I)`
//! and checkers that compare them with observed derived lengths.
//!
//! * `J_1` has derived length at most `2n` when `s(I) = n` and either the
//!   characteristic is 0 or `2^n < p`.
//! * In characteristic 0, `s(J_k) <= f_n(k)` where
//!   `f_1(k) = k + 1`, `f_n(0) = n` and
//!   `f_n(k) = f_n(k - 1) + f_{n-1}(2k) + 1`; for fixed `n` this is a
//!   polynomial of degree `n` in `k`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::derivation::{d_closure, DerivationMap};
use crate::error::{Error, Result};
use crate::liealg::IdealHandle;
use crate::scalar::{is_prime, FieldSpec};

/// Number of carries when adding `a` and `b` in base `p`; by Kummer's
/// theorem this is the exponent of `p` in `C(a + b, a)`.
pub fn kummer_carries(a: &BigUint, b: &BigUint, p: u64) -> u32 {
    let base = BigUint::from(p);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut carry = BigUint::zero();
    let mut carries = 0;
    while !(a.is_zero() && b.is_zero() && carry.is_zero()) {
        let digit_sum = &a % &base + &b % &base + &carry;
        if digit_sum >= base {
            carries += 1;
            carry = BigUint::one();
        } else {
            carry = BigUint::zero();
        }
        a /= &base;
        b /= &base;
    }
    carries
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Whether `p` divides `C(2^k, 2^(k-1))`, by counting carries in
/// `2^(k-1) + 2^(k-1)` base `p`.
pub fn central_binomial_divisible(p: u64, k: u32) -> Result<bool> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let half = BigUint::one() << (k - 1);
    Ok(kummer_carries(&half, &half, p) > 0)
}

/// Largest `n` such that the odd prime `p` divides none of
/// `C(2, 1), C(4, 2), ..., C(2^n, 2^(n-1))`. This is the largest `n` with
/// `2^n < p`, i.e. `n < log2 p`.
pub fn admissible_depth(p: u64) -> Result<u32> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidPrime(
            p,
            "the binomial threshold is stated for odd primes",
        ));
    }
    let mut n = 0;
    while !central_binomial_divisible(p, n + 1)? {
        n += 1;
    }
    Ok(n)
}

/// `n < log2 p`, with `p = 0` standing for characteristic 0 (always true).
pub fn below_log2(n: usize, p: u64) -> bool {
    if p == 0 {
        return true;
    }
    u32::try_from(n)
        .ok()
        .and_then(|n| 1u128.checked_shl(n))
        .is_some_and(|pow| pow < p as u128)
}

/// Rows `f_j(0..=len_j)` for `j = 1..=n`, with just enough of each lower
/// row to feed the next: `f_j` is needed up to `k * 2^(n-j)`.
fn bound_rows(n: usize, k: usize) -> Result<Vec<Vec<u64>>> {
    if n == 0 {
        return Err(Error::InvalidParameter("the bound is defined for n >= 1".into()));
    }
    let overflow = || Error::InvalidParameter(format!("f_{n}({k}) overflows u64"));
    let reach = |j: usize| -> Result<usize> {
        u32::try_from(n - j)
            .ok()
            .and_then(|e| 1usize.checked_shl(e))
            .and_then(|s| s.checked_mul(k))
            .filter(|&len| len <= 1 << 26)
            .ok_or_else(overflow)
    };
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    rows.push((0..=reach(1)?).map(|x| x as u64 + 1).collect());
    for j in 2..=n {
        let len = reach(j)?;
        let prev = &rows[j - 2];
        let mut row = Vec::with_capacity(len + 1);
        row.push(j as u64);
        for x in 1..=len {
            let v = row[x - 1]
                .checked_add(prev[2 * x])
                .and_then(|v| v.checked_add(1))
                .ok_or_else(overflow)?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `f_n(k)`, by exact dynamic programming over the recurrence.
pub fn bound_f(n: usize, k: usize) -> Result<u64> {
    let rows = bound_rows(n, k)?;
    Ok(rows[n - 1][k])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub bound: u64,
}

/// `f_n(k)` for `k = 0..=k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub n: usize,
    pub rows: Vec<BoundRow>,
    pub base_rule: &'static str,
}

pub const BOUND_RULE: &str = "f_1(k) = k + 1; f_n(0) = n; f_n(k) = f_n(k-1) + f_(n-1)(2k) + 1";

pub fn bound_table(n: usize, k_max: usize) -> Result<BoundTable> {
    let rows = bound_rows(n, k_max)?;
    Ok(BoundTable {
        n,
        rows: rows[n - 1][..=k_max]
            .iter()
            .enumerate()
            .map(|(k, &bound)| BoundRow { k, bound })
            .collect(),
        base_rule: BOUND_RULE,
    })
}

/// Coefficients (constant term first) of the degree-`n` polynomial that
/// interpolates `f_n` at `k = 0..=n`. The polynomial is confirmed against
/// `f_n` at `k = n+1..=2n`; a mismatch is reported as `Inconsistent`.
pub fn bound_polynomial(n: usize) -> Result<Vec<BigRational>> {
    let rows = bound_rows(n, 2 * n)?;
    let values: Vec<BigRational> = rows[n - 1][..=2 * n]
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect();
    let coeffs = interpolate(&values[..=n]);
    for (k, expected) in values.iter().enumerate().skip(n + 1) {
        if &evaluate(&coeffs, k) != expected {
            return Err(Error::Inconsistent(format!(
                "f_{n} disagrees with its interpolant at k = {k}"
            )));
        }
    }
    if coeffs.last().is_none_or(|c| c.is_zero()) {
        return Err(Error::Inconsistent(format!("f_{n} has degree below {n}")));
    }
    Ok(coeffs)
}

/// Lagrange interpolation through `(x, values[x])`, `x = 0..len`.
pub fn interpolate(values: &[BigRational]) -> Vec<BigRational> {
    let m = values.len();
    let mut coeffs = vec![BigRational::zero(); m];
    for (i, yi) in values.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - j) / (i - j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in (0..m).filter(|&j| j != i) {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            let shift = BigRational::from_integer(BigInt::from(j));
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &shift;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(i as i64 - j as i64));
        }
        let scale = yi / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    coeffs
}

pub fn evaluate(coeffs: &[BigRational], x: usize) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(x));
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `s(I + D(I)) <= 2n` if char 0 or `n < log2 p`.
    Solvability,
    /// `s(J_k) <= f_n(k)` in characteristic 0.
    Degree,
    /// `s(J_k) <= k + 1` for abelian `I` in characteristic 0.
    AbelianEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckContext {
    pub algebra: String,
    pub field: FieldSpec,
    pub ideal_dim: usize,
    pub closure_dim: usize,
    pub derivation: String,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheckReport {
    pub theorem: Theorem,
    pub hypotheses_met: bool,
    /// Derived length `n` of `I`.
    pub ideal_length: usize,
    /// Derived length of the closure, `None` if it is not solvable.
    pub observed: Option<usize>,
    pub bound: u64,
    /// `observed <= bound`.
    pub holds: bool,
    pub context: CheckContext,
}

impl TheoremCheckReport {
    /// The hypotheses hold but the bound does not.
    pub fn is_violation(&self) -> bool {
        self.hypotheses_met && !self.holds
    }
}

fn ideal_length(ideal: &IdealHandle) -> Result<usize> {
    ideal
        .derived_length()
        .ok_or_else(|| Error::InvalidParameter("the ideal is not solvable".into()))
}

fn derivation_label(d: &DerivationMap) -> String {
    let nonzero = (0..d.matrix().rows())
        .flat_map(|r| (0..d.matrix().cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| !d.matrix().get(r, c).is_zero())
        .count();
    format!("matrix with {nonzero} nonzero entries")
}

/// Compares `s(I + D(I))` with `2 s(I)`.
pub fn check_solvability_theorem(ideal: &IdealHandle, derivation: &DerivationMap) -> Result<TheoremCheckReport> {
    let n = ideal_length(ideal)?;
    let field = ideal.algebra().field();
    let closure = d_closure(ideal, derivation, 1)?;
    let j1 = closure.term(1);
    let observed = j1.derived_length();
    let bound = 2 * n as u64;
    Ok(TheoremCheckReport {
        theorem: Theorem::Solvability,
        hypotheses_met: below_log2(n, field.characteristic()),
        ideal_length: n,
        observed,
        bound,
        holds: observed.is_some_and(|o| o as u64 <= bound),
        context: CheckContext {
            algebra: ideal.algebra().label().to_string(),
            field,
            ideal_dim: ideal.dim(),
            closure_dim: j1.dim(),
            derivation: derivation_label(derivation),
            k: 1,
        },
    })
}

/// Compares `s(J_k)` with `f_n(k)` for `k = 0..=k_max`; for abelian `I`
/// the reports are tagged with the `k + 1` estimate (the same number).
/// Refuses fields of positive characteristic.
pub fn check_degree_theorem(
    ideal: &IdealHandle,
    derivation: &DerivationMap,
    k_max: usize,
) -> Result<Vec<TheoremCheckReport>> {
    let field = ideal.algebra().field();
    if !field.is_rationals() {
        return Err(Error::WrongCharacteristic(format!(
            "the polynomial bound is proved in characteristic 0 only, got {field}"
        )));
    }
    let n = ideal_length(ideal)?;
    let closure = d_closure(ideal, derivation, k_max)?;
    let bounds: Vec<u64> = if n == 0 {
        vec![0; k_max + 1]
    } else {
        bound_rows(n, k_max)?[n - 1][..=k_max].to_vec()
    };
    let theorem = if n == 1 {
        Theorem::AbelianEstimate
    } else {
        Theorem::Degree
    };
    Ok((0..=k_max)
        .map(|k| {
            let jk = closure.term(k);
            let observed = jk.derived_length();
            TheoremCheckReport {
                theorem,
                hypotheses_met: true,
                ideal_length: n,
                observed,
                bound: bounds[k],
                holds: observed.is_some_and(|o| o as u64 <= bounds[k]),
                context: CheckContext {
                    algebra: ideal.algebra().label().to_string(),
                    field,
                    ideal_dim: ideal.dim(),
                    closure_dim: jk.dim(),
                    derivation: derivation_label(derivation),
                    k,
                },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    #[test]
    fn central_binomial_examples() {
        assert!(!central_binomial_divisible(5, 2).unwrap()); // C(4,2) = 6
        assert!(central_binomial_divisible(5, 3).unwrap()); // C(8,4) = 70
        assert!(!central_binomial_divisible(3, 1).unwrap()); // C(2,1) = 2
        assert!(central_binomial_divisible(2, 1).unwrap());
        assert_eq!(central_binomial_divisible(4, 1), Err(Error::NotPrime(4)));
        assert!(central_binomial_divisible(5, 0).is_err());
    }

    #[test]
    fn kummer_matches_valuation() {
        for p in [2u64, 3, 5, 7] {
            for a in 0u32..20 {
                for b in 0u32..20 {
                    let c = binomial(BigUint::from(a + b), BigUint::from(a));
                    let mut v = 0;
                    let mut c = c;
                    let base = BigUint::from(p);
                    while (&c % &base).is_zero() {
                        c /= &base;
                        v += 1;
                    }
                    assert_eq!(
                        kummer_carries(&BigUint::from(a), &BigUint::from(b), p),
                        v,
                        "{a} {b} {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn admissible_depth_examples() {
        assert_eq!(admissible_depth(3), Ok(1));
        assert_eq!(admissible_depth(5), Ok(2));
        assert_eq!(admissible_depth(17), Ok(4));
        assert!(matches!(admissible_depth(2), Err(Error::InvalidPrime(2, _))));
        assert_eq!(admissible_depth(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn log2_predicate() {
        assert!(below_log2(1, 3));
        assert!(!below_log2(2, 3));
        assert!(below_log2(2, 5));
        assert!(!below_log2(3, 7));
        assert!(below_log2(3, 11));
        assert!(below_log2(40, 0));
        assert!(!below_log2(200, 7));
    }

    #[test]
    fn bound_examples() {
        for k in 0..10 {
            assert_eq!(bound_f(1, k).unwrap(), k as u64 + 1);
        }
        for n in 1..6 {
            assert_eq!(bound_f(n, 0).unwrap(), n as u64);
        }
        assert_eq!(bound_f(2, 1).unwrap(), 6);
        assert_eq!(bound_f(2, 2).unwrap(), 12);
        assert_eq!(bound_f(2, 3).unwrap(), 20);
        assert!(bound_f(0, 3).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(bound_polynomial(1).unwrap(), vec![int(1), int(1)]);
        assert_eq!(bound_polynomial(2).unwrap(), vec![int(2), int(3), int(1)]);
        for n in 1..=5 {
            let coeffs = bound_polynomial(n).unwrap();
            assert_eq!(coeffs.len(), n + 1);
            assert!(!coeffs[n].is_zero());
        }
    }

    #[test]
    fn table_shape() {
        let t = bound_table(1, 5).unwrap();
        let values: Vec<u64> = t.rows.iter().map(|r| r.bound).collect();
        assert_eq!(values, vec![1, 2, 3, 4, 5, 6]);
    }
}
