//! A catalog of Lie algebras with known structure, and seeded random
//! solvable instances.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::derivation::{derivation_algebra, DerivationMap};
use crate::error::{Error, Result};
use crate::liealg::{IdealHandle, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{FieldSpec, Scalar};

/// `F^n` with the zero bracket.
pub fn abelian(n: usize, field: FieldSpec) -> Result<LieAlgebra> {
    Ok(LieAlgebra::builder(field, n)
        .build()?
        .with_label(format!("abelian:{n}")))
}

/// Basis `x, y, z` with `[x, y] = z`.
pub fn heisenberg(field: FieldSpec) -> Result<LieAlgebra> {
    Ok(LieAlgebra::builder(field, 3)
        .bracket(0, 1, &[(1, 2)])
        .build()?
        .with_label("heisenberg"))
}

/// The two-dimensional nonabelian algebra: basis `x, y` with `[x, y] = y`.
pub fn affine_line(field: FieldSpec) -> Result<LieAlgebra> {
    Ok(LieAlgebra::builder(field, 2)
        .bracket(0, 1, &[(1, 1)])
        .build()?
        .with_label("affine"))
}

/// Basis `e, f, h` with `[e, f] = h`, `[h, e] = 2e`, `[h, f] = -2f`.
///
/// In characteristic 2 the table is still a Lie algebra but it is not
/// simple; see [`sl2_is_simple`].
pub fn sl2(field: FieldSpec) -> Result<LieAlgebra> {
    Ok(LieAlgebra::builder(field, 3)
        .bracket(0, 1, &[(1, 2)])
        .bracket(2, 0, &[(2, 0)])
        .bracket(2, 1, &[(-2, 1)])
        .build()?
        .with_label("sl2"))
}

pub fn sl2_is_simple(field: FieldSpec) -> bool {
    field.characteristic() != 2
}

/// Upper triangular `n x n` matrices (diagonal included) under the
/// commutator. Basis `E_ab`, `a <= b`, in lexicographic order.
pub fn borel_upper(n: usize, field: FieldSpec) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(Error::InvalidParameter("borel:n needs n >= 1".into()));
    }
    let units: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| units.iter().position(|&u| u == (a, b));
    let mut builder = LieAlgebra::builder(field, units.len());
    for (s, &(a, b)) in units.iter().enumerate() {
        for (t, &(c, d)) in units.iter().enumerate().skip(s + 1) {
            // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            let mut terms = Vec::new();
            if b == c {
                terms.push((field.one(), index(a, d).expect("a <= b = c <= d")));
            }
            if d == a {
                terms.push((-field.one(), index(c, b).expect("c <= d = a <= b")));
            }
            builder.set(s, t, &terms);
        }
    }
    Ok(builder.build()?.with_label(format!("borel:{n}")))
}

/// `L1 ⊕ L2` with each summand as an ideal.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub algebra: Arc<LieAlgebra>,
    pub first: IdealHandle,
    pub second: IdealHandle,
}

/// Block structure constants; the basis of `l1` comes first.
pub fn direct_sum(l1: &LieAlgebra, l2: &LieAlgebra) -> Result<DirectSum> {
    if l1.field() != l2.field() {
        return Err(Error::FieldMismatch {
            left: l1.field(),
            right: l2.field(),
        });
    }
    let field = l1.field();
    let (n1, n2) = (l1.dim(), l2.dim());
    let mut builder = LieAlgebra::builder(field, n1 + n2);
    for (offset, l) in [(0, l1), (n1, l2)] {
        for i in 0..l.dim() {
            for j in i + 1..l.dim() {
                let terms: Vec<(Scalar, usize)> = l
                    .basis_bracket(i, j)
                    .iter()
                    .map(|(k, c)| (c.clone(), k + offset))
                    .collect();
                builder.set(i + offset, j + offset, &terms);
            }
        }
    }
    let label = match (l1.label(), l2.label()) {
        ("", _) | (_, "") => String::new(),
        (a, b) => format!("{a}+{b}"),
    };
    let algebra = Arc::new(builder.build()?.with_label(label));
    let first = IdealHandle::new(
        &algebra,
        Subspace::coordinate(field, n1 + n2, &(0..n1).collect::<Vec<_>>())?,
    )?;
    let second = IdealHandle::new(
        &algebra,
        Subspace::coordinate(field, n1 + n2, &(n1..n1 + n2).collect::<Vec<_>>())?,
    )?;
    Ok(DirectSum { algebra, first, second })
}

/// `S ⊗ F[t]/(t^p)` with its solvable radical `S ⊗ tF[t]/(t^p)` and the
/// derivation `id ⊗ d/dt`.
#[derive(Clone, Debug)]
pub struct CurrentAlgebra {
    pub algebra: Arc<LieAlgebra>,
    pub radical: IdealHandle,
    pub derivation: DerivationMap,
    pub p: u64,
}

/// Builds `S ⊗ F[t]/(t^p)` over `GF(p)`.
///
/// The group algebra of the cyclic group of order `p` over `GF(p)` is
/// `F[g]/(g^p - 1) = F[g]/((g - 1)^p)`, which is this truncated polynomial
/// ring with `t = g - 1`. Basis `e_i ⊗ t^a` sits at index `a * dim S + i`
/// (blocks by power of `t`); the bracket is
/// `[x ⊗ t^a, y ⊗ t^b] = [x, y] ⊗ t^(a+b)`, zero once `a + b >= p`.
///
/// `S` must be perfect with trivial center (for example `sl2` with
/// `p > 2`), otherwise the claimed radical would be wrong.
pub fn truncated_current_algebra(s: &LieAlgebra, p: u64) -> Result<CurrentAlgebra> {
    let field = FieldSpec::prime(p)?;
    if s.field() != field {
        return Err(Error::FieldMismatch {
            left: field,
            right: s.field(),
        });
    }
    let full = s.full_subspace();
    if s.dim() == 0 || s.bracket_spaces(&full, &full)? != full || !s.center().is_zero() {
        return Err(Error::InvalidParameter(format!(
            "the simple factor must be perfect with trivial center over {field}"
        )));
    }
    let m = s.dim();
    let p_us = p as usize;
    let n = m * p_us;
    let idx = |a: usize, i: usize| a * m + i;
    let mut builder = LieAlgebra::builder(field, n);
    for a in 0..p_us {
        for b in 0..p_us {
            for i in 0..m {
                for j in 0..m {
                    let (u, v) = (idx(a, i), idx(b, j));
                    if u >= v {
                        continue;
                    }
                    let terms: Vec<(Scalar, usize)> = if a + b < p_us {
                        s.basis_bracket(i, j)
                            .iter()
                            .map(|(k, c)| (c.clone(), idx(a + b, *k)))
                            .collect()
                    } else {
                        Vec::new()
                    };
                    builder.set(u, v, &terms);
                }
            }
        }
    }
    let label = if s.label().is_empty() {
        format!("current:{p}")
    } else {
        format!("{}⊗F[t]/(t^{p})", s.label())
    };
    let algebra = Arc::new(builder.build()?.with_label(label));
    let radical = IdealHandle::new(&algebra, Subspace::coordinate(field, n, &(m..n).collect::<Vec<_>>())?)?;
    let mut d = Matrix::zeros(field, n, n);
    for a in 1..p_us {
        for i in 0..m {
            d.set(idx(a - 1, i), idx(a, i), field.from_integer(a as i64));
        }
    }
    let derivation = DerivationMap::new(&algebra, d)?;
    Ok(CurrentAlgebra {
        algebra,
        radical,
        derivation,
        p,
    })
}

/// `sl2 ⊗ F[t]/(t^p)` over `GF(p)`, `p` an odd prime.
pub fn jacobson(p: u64) -> Result<CurrentAlgebra> {
    if p == 2 {
        return Err(Error::InvalidParameter("sl2 is not simple in characteristic 2".into()));
    }
    let field = FieldSpec::prime(p)?;
    let mut c = truncated_current_algebra(&sl2(field)?, p)?;
    let relabeled = (*c.algebra).clone().with_label(format!("jacobson:{p}"));
    let algebra = Arc::new(relabeled);
    c.radical = IdealHandle::new(&algebra, c.radical.space().clone())?;
    c.derivation = DerivationMap::new(&algebra, c.derivation.matrix().clone())?;
    c.algebra = algebra;
    Ok(c)
}

/// Parses a catalog name such as `sl2`, `abelian:3`, `borel:3`,
/// `heisenberg`, `affine`, `jacobson:5`, or a `+`-separated direct sum of
/// these (`sl2+heisenberg`). `jacobson:p` always lives over `GF(p)`; the
/// other names use `field`.
pub fn catalog(spec: &str, field: FieldSpec) -> Result<LieAlgebra> {
    let mut parts = spec.split('+').map(str::trim);
    let first = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| unknown(spec))?;
    let mut acc = catalog_term(first, field)?;
    for part in parts {
        let next = catalog_term(part, field)?;
        acc = (*direct_sum(&acc, &next)?.algebra).clone();
    }
    Ok(acc)
}

fn unknown(spec: &str) -> Error {
    Error::InvalidParameter(format!(
        "unknown algebra `{spec}` (try sl2, heisenberg, affine, abelian:n, borel:n, jacobson:p, or sums with +)"
    ))
}

fn catalog_term(term: &str, field: FieldSpec) -> Result<LieAlgebra> {
    let (name, arg) = match term.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (term, None),
    };
    let number = || -> Result<u64> {
        arg.ok_or_else(|| unknown(term))?
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad parameter in `{term}`")))
    };
    match (name, arg.is_some()) {
        ("sl2", false) => sl2(field),
        ("heisenberg", false) => heisenberg(field),
        ("affine", false) => affine_line(field),
        ("abelian", true) => abelian(number()? as usize, field),
        ("borel", true) => borel_upper(number()? as usize, field),
        ("jacobson", true) => {
            let p = number()?;
            if !field.is_rationals() && field.characteristic() != p {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: FieldSpec::prime(p)?,
                });
            }
            Ok((*jacobson(p)?.algebra).clone())
        }
        _ => Err(unknown(term)),
    }
}

/// A seeded random solvable algebra with an ideal and a derivation.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub seed: u64,
    /// `(m, r)` for `borel_upper(m) ⊕ abelian(r)` before the basis change.
    pub shape: (usize, usize),
    pub algebra: Arc<LieAlgebra>,
    pub ideal: IdealHandle,
    pub derivation: DerivationMap,
}

impl RandomInstance {
    /// SHA-256 over the structure constants, ideal basis and derivation.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        let alg = &self.algebra;
        hasher.update(format!("{} {}\n", alg.field(), alg.dim()));
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                for (k, c) in alg.basis_bracket(i, j) {
                    hasher.update(format!("{i} {j} {k} {c}\n"));
                }
            }
        }
        for row in self.ideal.space().to_string_rows() {
            hasher.update(format!("I {}\n", row.join(" ")));
        }
        hasher.update(format!("D\n{}", self.derivation.matrix()));
        hex::encode(hasher.finalize())
    }
}

/// `borel_upper(m) ⊕ abelian(r)` with `dim` in `dims`, after a random
/// unimodular change of basis; the ideal is a random derived term of a
/// random ideal, and the derivation a random combination of a basis of
/// the derivation algebra. Fully determined by `seed`.
pub fn random_solvable_instance(seed: u64, dims: RangeInclusive<usize>, field: FieldSpec) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: Vec<(usize, usize)> = (1..=3usize)
        .flat_map(|m| {
            let base = m * (m + 1) / 2;
            let dims = dims.clone();
            (0..=*dims.end()).filter_map(move |r| dims.contains(&(base + r)).then_some((m, r)))
        })
        .collect();
    if shapes.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no borel(m) + abelian(r) shape has dimension in {}..={}",
            dims.start(),
            dims.end()
        )));
    }
    let (m, r) = shapes[rng.random_range(0..shapes.len())];
    let structured = if r == 0 {
        borel_upper(m, field)?
    } else {
        (*direct_sum(&borel_upper(m, field)?, &abelian(r, field)?)?.algebra).clone()
    };
    let n = structured.dim();

    let change = random_unimodular(&mut rng, field, n);
    let inverse = change.inverse()?;
    let columns: Vec<Vec<Scalar>> = (0..n).map(|j| change.column(j)).collect();
    let mut builder = LieAlgebra::builder(field, n);
    for i in 0..n {
        for j in i + 1..n {
            let image = inverse.mul_vec(&structured.bracket(&columns[i], &columns[j])?)?;
            let terms: Vec<(Scalar, usize)> = image.into_iter().enumerate().map(|(k, c)| (c, k)).collect();
            builder.set(i, j, &terms);
        }
    }
    let label = format!("random:{seed}");
    let algebra = Arc::new(builder.build()?.with_label(label));

    let basis: Vec<Matrix> = derivation_algebra(&structured)
        .into_iter()
        .map(|d| inverse.mul(&d).and_then(|x| x.mul(&change)))
        .collect::<Result<_>>()?;
    let (ideal, derivation) = random_ideal_and_derivation(&mut rng, &algebra, &basis)?;
    Ok(RandomInstance {
        seed,
        shape: (m, r),
        algebra,
        ideal,
        derivation,
    })
}

/// Unit lower times unit upper triangular, entries in `{-1, 0, 1}`.
fn random_unimodular(rng: &mut impl Rng, field: FieldSpec, n: usize) -> Matrix {
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::identity(field, n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, field.from_integer(rng.random_range(-1..=1)));
            upper.set(j, i, field.from_integer(rng.random_range(-1..=1)));
        }
    }
    lower.mul(&upper).expect("square matrices of equal size")
}

fn random_vector(rng: &mut impl Rng, field: FieldSpec, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| field.from_integer(rng.random_range(-2..=2))).collect()
}

/// A random nonzero ideal (the whole algebra, or a derived term of the
/// ideal generated by a random vector) and a random derivation drawn from
/// the span of `der_basis`.
pub fn random_ideal_and_derivation(
    rng: &mut impl Rng,
    algebra: &Arc<LieAlgebra>,
    der_basis: &[Matrix],
) -> Result<(IdealHandle, DerivationMap)> {
    let field = algebra.field();
    let n = algebra.dim();
    let generated = if rng.random_bool(0.25) {
        IdealHandle::full(algebra)
    } else {
        let mut ideal = IdealHandle::zero(algebra);
        for _ in 0..16 {
            let x = random_vector(rng, field, n);
            ideal = IdealHandle::generated_by(algebra, &x)?;
            if ideal.dim() > 0 {
                break;
            }
        }
        ideal
    };
    let series = generated.derived_series();
    let nonzero = series.iter().take_while(|t| t.dim() > 0).count().max(1);
    let ideal = series[rng.random_range(0..nonzero)].clone();

    let mut matrix = Matrix::zeros(field, n, n);
    for _ in 0..16 {
        matrix = Matrix::zeros(field, n, n);
        for d in der_basis {
            let c = field.from_integer(rng.random_range(-2..=2));
            if !c.is_zero() {
                matrix = matrix.add(&d.scale(&c))?;
            }
        }
        if !matrix.is_zero() || der_basis.is_empty() {
            break;
        }
    }
    let derivation = DerivationMap::new(algebra, matrix)?;
    Ok((ideal, derivation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::is_derivation;

    const Q: FieldSpec = FieldSpec::RATIONALS;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn series_dims(l: &LieAlgebra) -> Vec<usize> {
        l.derived_series(&l.full_subspace())
            .unwrap()
            .iter()
            .map(Subspace::dim)
            .collect()
    }

    #[test]
    fn catalog_facts() {
        assert_eq!(series_dims(&abelian(3, Q).unwrap()), vec![3, 0]);
        assert_eq!(series_dims(&affine_line(gf(7)).unwrap()), vec![2, 1, 0]);
        let s = sl2(Q).unwrap();
        assert!(s.center().is_zero());
        assert!(!s.killing_form().determinant().unwrap().is_zero());
        assert!(!s.is_solvable());
        let h = heisenberg(Q).unwrap();
        assert_eq!(h.derived_length(&h.full_subspace()).unwrap(), Some(2));
    }

    #[test]
    fn borel_derived_length() {
        for n in 1..=4usize {
            let b = borel_upper(n, Q).unwrap();
            assert_eq!(b.dim(), n * (n + 1) / 2);
            let expected = (n as f64).log2().ceil() as usize + 1;
            assert_eq!(b.derived_length(&b.full_subspace()).unwrap(), Some(expected), "n = {n}");
        }
    }

    #[test]
    fn direct_sum_examples() {
        let h = heisenberg(Q).unwrap();
        let with_zero = direct_sum(&h, &abelian(0, Q).unwrap()).unwrap();
        assert_eq!(*with_zero.algebra, h);
        let hh = direct_sum(&h, &h).unwrap();
        assert_eq!(hh.algebra.derived_length(&hh.algebra.full_subspace()).unwrap(), Some(2));
        assert_eq!(hh.first.dim(), 3);
        assert_eq!(hh.second.derived_length(), Some(2));
        assert!(matches!(
            direct_sum(&h, &heisenberg(gf(3)).unwrap()),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn current_algebra_p3() {
        let c = jacobson(3).unwrap();
        assert_eq!(c.algebra.dim(), 9);
        assert_eq!(c.radical.dim(), 6);
        assert_eq!(c.radical.derived_length(), Some(2));
        assert!(is_derivation(&c.algebra, c.derivation.matrix()).unwrap());
        let image = c.radical.space().image(c.derivation.matrix()).unwrap();
        assert!(!image.is_subspace_of(c.radical.space()).unwrap());
        // D(e ⊗ t) = e ⊗ 1
        let et = c.algebra.basis_vector(3);
        assert_eq!(c.derivation.apply(&et).unwrap(), c.algebra.basis_vector(0));
    }

    #[test]
    fn current_algebra_p5() {
        let c = jacobson(5).unwrap();
        assert_eq!(c.algebra.dim(), 15);
        assert_eq!(c.radical.derived_length(), Some(3));
    }

    #[test]
    fn current_algebra_rejects_bad_input() {
        assert!(matches!(jacobson(2), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            truncated_current_algebra(&sl2(gf(2)).unwrap(), 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            truncated_current_algebra(&sl2(gf(5)).unwrap(), 3),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(matches!(
            truncated_current_algebra(&heisenberg(gf(3)).unwrap(), 3),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn catalog_names() {
        assert_eq!(catalog("sl2+abelian:1", Q).unwrap().dim(), 4);
        assert_eq!(catalog("borel:3", Q).unwrap().dim(), 6);
        assert_eq!(catalog("jacobson:3", Q).unwrap().field(), gf(3));
        assert!(catalog("jacobson:3", gf(5)).is_err());
        assert!(catalog("so3", Q).is_err());
        assert!(catalog("abelian", Q).is_err());
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        for seed in 0..20 {
            let field = if seed % 2 == 0 { Q } else { gf(7) };
            let inst = random_solvable_instance(seed, 1..=8, field).unwrap();
            assert!(inst.algebra.dim() <= 8);
            assert!(inst.algebra.is_solvable());
            assert!(is_derivation(&inst.algebra, inst.derivation.matrix()).unwrap());
            assert!(inst.ideal.dim() > 0);
            let again = random_solvable_instance(seed, 1..=8, field).unwrap();
            assert_eq!(inst.fingerprint(), again.fingerprint());
        }
    }

    #[test]
    fn basis_change_preserves_derived_series() {
        for seed in 0..10 {
            let inst = random_solvable_instance(seed, 1..=8, Q).unwrap();
            let (m, r) = inst.shape;
            let plain = catalog(&format!("borel:{m}+abelian:{r}"), Q).unwrap();
            assert_eq!(series_dims(&inst.algebra), series_dims(&plain));
        }
    }
}
