//! Text formats for algebras and derivations.
//!
//! Algebra files:
//!
//! ```text
//! # sl2 with basis e, f, h
//! field Q
//! dim 3
//! b 1 2 : 1*3
//! b 3 1 : 2*1
//! b 3 2 : -2*2
//! ```
//!
//! `b i j : c1*k1 c2*k2 ...` sets `[e_i, e_j] = c1 e_k1 + c2 e_k2 + ...`
//! (1-based). A bare `k` means coefficient 1 and an empty right-hand side
//! means zero. `[e_j, e_i]` is filled in by antisymmetry; giving both
//! orders is allowed only when they agree. Over `GF(p)` coefficients must
//! be integers and are reduced on load.
//!
//! Derivation files hold `dim n` followed by `n` rows of `n` scalars.
//! Column `j` is the image of `e_j`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{FieldSpec, Scalar};

/// Lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_dim(line: usize, rest: &str) -> Result<usize> {
    rest.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("bad dimension `{}`", rest.trim())))
}

fn parse_index(line: usize, token: &str, dim: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(i) if (1..=dim).contains(&i) => Ok(i - 1),
        _ => Err(Error::parse(line, format!("basis index `{token}` is not in 1..={dim}"))),
    }
}

/// Parses an algebra file without checking the Lie axioms; call
/// [`LieAlgebra::validate`] on the result.
pub fn parse_algebra_unvalidated(text: &str) -> Result<LieAlgebra> {
    let mut field = None;
    let mut dim = None;
    // Explicit entries keyed by (i, j) with i < j, stored for [e_i, e_j].
    let mut entries: BTreeMap<(usize, usize), (usize, Vec<Scalar>)> = BTreeMap::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(Error::parse(line, "duplicate `field` line"));
                }
                field = Some(
                    rest.trim()
                        .parse::<FieldSpec>()
                        .map_err(|e| Error::parse(line, e.to_string()))?,
                );
            }
            "dim" => {
                if dim.is_some() {
                    return Err(Error::parse(line, "duplicate `dim` line"));
                }
                dim = Some(parse_dim(line, rest)?);
            }
            "b" => {
                let (Some(field), Some(dim)) = (field, dim) else {
                    return Err(Error::parse(line, "`field` and `dim` must precede bracket lines"));
                };
                let (lhs, rhs) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "expected `b i j : terms`"))?;
                let idx: Vec<&str> = lhs.split_whitespace().collect();
                let [i, j] = idx[..] else {
                    return Err(Error::parse(line, "expected two basis indices before `:`"));
                };
                let (i, j) = (parse_index(line, i, dim)?, parse_index(line, j, dim)?);
                let mut value = vec![field.zero(); dim];
                for term in rhs.split_whitespace() {
                    let (coef, k) = match term.split_once('*') {
                        Some((c, k)) => (
                            Scalar::parse(c, field).map_err(|e| Error::parse(line, e.to_string()))?,
                            k,
                        ),
                        None => (field.one(), term),
                    };
                    let k = parse_index(line, k, dim)?;
                    value[k] = &value[k] + &coef;
                }
                if i == j {
                    if value.iter().any(|c| !c.is_zero()) {
                        return Err(Error::parse(line, format!("[e{0}, e{0}] must be zero", i + 1)));
                    }
                    continue;
                }
                let (key, value) = if i < j {
                    ((i, j), value)
                } else {
                    ((j, i), value.iter().map(|c| -c).collect())
                };
                if let Some((first, existing)) = entries.get(&key) {
                    if *existing != value {
                        return Err(Error::parse(
                            line,
                            format!(
                                "[e{}, e{}] conflicts with the entry on line {first}",
                                key.0 + 1,
                                key.1 + 1
                            ),
                        ));
                    }
                } else {
                    entries.insert(key, (line, value));
                }
            }
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(last_line, "missing `field` line"))?;
    let dim = dim.ok_or_else(|| Error::parse(last_line, "missing `dim` line"))?;
    let mut builder = LieAlgebra::builder(field, dim);
    for ((i, j), (_, value)) in entries {
        let terms: Vec<(Scalar, usize)> = value.into_iter().enumerate().map(|(k, c)| (c, k)).collect();
        builder.set(i, j, &terms);
    }
    builder.build_unvalidated()
}

/// Parses and validates an algebra file.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let algebra = parse_algebra_unvalidated(text)?;
    algebra.validate().map_err(Error::InvalidAlgebra)?;
    Ok(algebra)
}

/// Writes an algebra file listing the nonzero brackets with `i < j`.
pub fn algebra_to_string(algebra: &LieAlgebra) -> String {
    let mut out = String::new();
    if !algebra.label().is_empty() {
        let _ = writeln!(out, "# {}", algebra.label());
    }
    let _ = writeln!(out, "field {}", algebra.field());
    let _ = writeln!(out, "dim {}", algebra.dim());
    for i in 0..algebra.dim() {
        for j in i + 1..algebra.dim() {
            let terms = algebra.basis_bracket(i, j);
            if terms.is_empty() {
                continue;
            }
            let rhs: Vec<String> = terms.iter().map(|(k, c)| format!("{c}*{}", k + 1)).collect();
            let _ = writeln!(out, "b {} {} : {}", i + 1, j + 1, rhs.join(" "));
        }
    }
    out
}

/// Parses a derivation file for an algebra over `field` of dimension
/// `dim`. The Leibniz rule is not checked here.
pub fn parse_matrix(text: &str, field: FieldSpec, dim: usize) -> Result<Matrix> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `dim` line"))?;
    let n = match header.split_once(char::is_whitespace) {
        Some(("dim", rest)) => parse_dim(line, rest)?,
        _ => return Err(Error::parse(line, "expected `dim n`")),
    };
    if n != dim {
        return Err(Error::parse(
            line,
            format!("dimension {n} does not match the algebra ({dim})"),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = line;
    for (line, content) in lines {
        last = line;
        if rows.len() == n {
            return Err(Error::parse(line, format!("more than {n} rows")));
        }
        let row: Vec<Scalar> = content
            .split_whitespace()
            .map(|t| Scalar::parse(t, field).map_err(|e| Error::parse(line, e.to_string())))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::parse(line, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(last, format!("expected {n} rows, found {}", rows.len())));
    }
    Matrix::from_rows(field, n, rows)
}

pub fn matrix_to_string(m: &Matrix) -> String {
    let mut out = format!("dim {}\n", m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(Scalar::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{borel_upper, heisenberg, sl2};
    use crate::liealg::Violation;

    const SL2: &str = "# e f h\nfield Q\ndim 3\nb 1 2 : 1*3\nb 3 1 : 2*1\nb 3 2 : -2*2\n";

    #[test]
    fn parses_sl2() {
        let l = parse_algebra(SL2).unwrap();
        assert_eq!(l, sl2(FieldSpec::RATIONALS).unwrap());
    }

    #[test]
    fn bare_index_and_consistent_duplicates() {
        let text = "field GF(5)\ndim 3\nb 1 2 : 3\nb 2 1 : -1*3   # same bracket\n";
        let l = parse_algebra(text).unwrap();
        assert_eq!(l, heisenberg(FieldSpec::prime(5).unwrap()).unwrap());
    }

    #[test]
    fn residues_reduce_on_load() {
        let text = "field GF(5)\ndim 2\nb 1 2 : 6*2\n";
        let l = parse_algebra(text).unwrap();
        assert!(l.structure_constant(0, 1, 1).is_one());
        let frac = "field GF(5)\ndim 2\nb 1 2 : 1/2*2\n";
        assert!(matches!(parse_algebra(frac), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn conflicts_report_lines() {
        let text = "field Q\ndim 3\nb 1 2 : 3\n\nb 2 1 : 3\n";
        assert!(matches!(parse_algebra(text), Err(Error::Parse { line: 5, .. })));
        let diag = "field Q\ndim 2\nb 1 1 : 2\n";
        assert!(matches!(parse_algebra(diag), Err(Error::Parse { line: 3, .. })));
        let range = "field Q\ndim 2\nb 1 3 : 2\n";
        assert!(matches!(parse_algebra(range), Err(Error::Parse { line: 3, .. })));
        let order = "b 1 2 : 1\nfield Q\ndim 2\n";
        assert!(matches!(parse_algebra(order), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_algebra("field Q\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn jacobi_violation_is_reported() {
        let text = "field Q\ndim 3\nb 1 2 : 3\nb 3 1 : 1\n";
        match parse_algebra(text) {
            Err(Error::InvalidAlgebra(Violation::Jacobi { .. })) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_algebra_unvalidated(text).is_ok());
    }

    #[test]
    fn writer_round_trips() {
        let b = borel_upper(3, FieldSpec::RATIONALS).unwrap();
        assert_eq!(parse_algebra(&algebra_to_string(&b)).unwrap(), b);
    }

    #[test]
    fn derivation_file() {
        let q = FieldSpec::RATIONALS;
        let m = parse_matrix("dim 2\n1 0\n0 1/2\n", q, 2).unwrap();
        assert_eq!(m.get(1, 1), &q.parse_scalar("1/2").unwrap());
        assert_eq!(parse_matrix(&matrix_to_string(&m), q, 2).unwrap(), m);
        assert!(matches!(parse_matrix("dim 2\n1 0\n", q, 2), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_matrix("dim 2\n1 0 0\n0 1\n", q, 2),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("dim 3\n", q, 2),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
