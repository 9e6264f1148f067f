use super::Subspace;
use crate::scalar::{FieldSpec, Scalar};

type SparseRow = Vec<(usize, Scalar)>;

/// Incremental Gauss-Jordan elimination on sparse rows.
///
/// Rows are fed one at a time and the stored rows are kept fully reduced,
/// so feeding a new row costs one merge per stored pivot it touches. This
/// handles linear systems with many more equations than unknowns, such as
/// the Leibniz conditions defining a derivation algebra.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: FieldSpec,
    cols: usize,
    rows: Vec<SparseRow>,
    // pivot column -> index into `rows`
    pivot_row: Vec<Option<usize>>,
}

impl SparseEchelon {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        SparseEchelon {
            field,
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds the equation `sum coeff * x_col = 0`. Terms may repeat a column;
    /// zero coefficients are ignored. Returns whether the rank grew.
    pub fn push(&mut self, terms: impl IntoIterator<Item = (usize, Scalar)>) -> bool {
        let mut row = normalize(terms);
        if row.is_empty() {
            return false;
        }
        // Stored rows are reduced, so clearing each pivot present in the
        // original row never reintroduces another pivot.
        let hits: Vec<(usize, Scalar)> = row
            .iter()
            .filter_map(|(c, v)| self.pivot_row[*c].map(|r| (r, v.clone())))
            .collect();
        for (r, factor) in hits {
            row = axpy(&row, &-factor, &self.rows[r]);
        }
        let Some((lead, lead_value)) = row.first().cloned() else {
            return false;
        };
        let inv = lead_value.inv().expect("leading entry is nonzero");
        for (_, v) in row.iter_mut() {
            *v = &*v * &inv;
        }
        for stored in self.rows.iter_mut() {
            if let Ok(pos) = stored.binary_search_by_key(&lead, |(c, _)| *c) {
                let factor = -&stored[pos].1;
                *stored = axpy(stored, &factor, &row);
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    /// Solution space of the accumulated homogeneous system.
    pub fn kernel(&self) -> Subspace {
        let vectors = (0..self.cols).filter(|&c| self.pivot_row[c].is_none()).map(|free| {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for row in &self.rows {
                if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[row[0].0] = -&row[pos].1;
                }
            }
            v
        });
        Subspace::span(self.field, self.cols, vectors).expect("kernel vectors have the right shape")
    }
}

fn normalize(terms: impl IntoIterator<Item = (usize, Scalar)>) -> SparseRow {
    let mut row: SparseRow = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    row.sort_by_key(|(c, _)| *c);
    let mut merged: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some((last, acc)) if *last == c => *acc = &*acc + &v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    merged
}

/// `a + factor * b` on sorted sparse rows.
fn axpy(a: &[(usize, Scalar)], factor: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(factor * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn agrees_with_dense_kernel() {
        let q = FieldSpec::RATIONALS;
        let m = Matrix::from_integers(q, &[&[1, 2, 0, -1], &[2, 4, 1, 0], &[3, 6, 1, -1], &[0, 0, 0, 0]]);
        let mut e = SparseEchelon::new(q, 4);
        for row in m.row_iter() {
            e.push(row.iter().cloned().enumerate());
        }
        assert_eq!(e.rank(), m.rank());
        assert_eq!(e.kernel(), m.kernel());
    }

    #[test]
    fn repeated_columns_are_merged() {
        let f = FieldSpec::prime(5).unwrap();
        let mut e = SparseEchelon::new(f, 2);
        // 2x0 + 3x0 = 5x0 = 0 in GF(5): no information.
        assert!(!e.push([(0, f.from_integer(2)), (0, f.from_integer(3))]));
        assert!(e.push([(0, f.one()), (1, f.one())]));
        assert_eq!(e.kernel().dim(), 1);
    }
}
