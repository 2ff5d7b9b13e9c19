//! Sparse matrices over the exact scalars, stored column-major. Just enough
//! linear algebra for chain complexes: construction from triplets, products,
//! linear combinations, horizontal stacking, and dense extraction for the
//! small solves. Rank computations live in [`crate::homology`].

use crate::scalar::{Coef, FieldSpec};
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({0},{1}) is outside a {2}x{3} matrix")]
    OutOfBounds(usize, usize, usize, usize),
    #[error("coefficient field mismatch: matrix over {0}, entry over {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// A sparse matrix with entries sorted by (col, row); zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<(u32, u32, Coef)>, // (row, col, value), sorted by (col, row)
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        SparseMatrix {
            rows,
            cols,
            field,
            entries: Vec::new(),
        }
    }

    pub fn identity(k: usize, field: FieldSpec) -> Self {
        let entries = (0..k as u32).map(|i| (i, i, Coef::one(field))).collect();
        SparseMatrix {
            rows: k,
            cols: k,
            field,
            entries,
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        triplets: impl IntoIterator<Item = (usize, usize, Coef)>,
    ) -> Result<Self, MatrixError> {
        let mut acc: BTreeMap<(u32, u32), Coef> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfBounds(r, c, rows, cols));
            }
            if v.field() != field {
                return Err(MatrixError::FieldMismatch(field, v.field()));
            }
            let key = (c as u32, r as u32);
            let cur = acc.remove(&key).map_or(v.clone(), |old| old.add(&v));
            if !cur.is_zero() {
                acc.insert(key, cur);
            }
        }
        let entries = acc.into_iter().map(|((c, r), v)| (r, c, v)).collect();
        Ok(SparseMatrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// All stored entries, sorted by (col, row).
    pub fn entries(&self) -> &[(u32, u32, Coef)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Coef {
        let lo = self
            .entries
            .partition_point(|(er, ec, _)| (*ec, *er) < (c as u32, r as u32));
        match self.entries.get(lo) {
            Some((er, ec, v)) if *er == r as u32 && *ec == c as u32 => v.clone(),
            _ => Coef::zero(self.field),
        }
    }

    /// The entries of column j as (row, value) pairs, sorted by row.
    pub fn col(&self, j: usize) -> &[(u32, u32, Coef)] {
        let j = j as u32;
        let lo = self.entries.partition_point(|(_, ec, _)| *ec < j);
        let hi = self.entries.partition_point(|(_, ec, _)| *ec <= j);
        &self.entries[lo..hi]
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch(self.field, other.field));
        }
        let mut acc: BTreeMap<(u32, u32), Coef> = BTreeMap::new();
        for (k, j, b) in &other.entries {
            for (i, _, a) in self.col(*k as usize) {
                let prod = a.mul(b);
                let key = (*j, *i);
                let cur = acc.remove(&key).map_or(prod.clone(), |old| old.add(&prod));
                if !cur.is_zero() {
                    acc.insert(key, cur);
                }
            }
        }
        let entries = acc.into_iter().map(|((c, r), v)| (r, c, v)).collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            entries,
        })
    }

    /// Sum of scaled matrices of identical shape.
    pub fn linear_combination(
        parts: &[(Coef, &SparseMatrix)],
    ) -> Result<SparseMatrix, MatrixError> {
        let (rows, cols, field) = match parts.first() {
            Some((_, m)) => (m.rows, m.cols, m.field),
            None => return Err(MatrixError::Shape("empty combination".into())),
        };
        let mut acc: BTreeMap<(u32, u32), Coef> = BTreeMap::new();
        for (c, m) in parts {
            if m.rows != rows || m.cols != cols {
                return Err(MatrixError::Shape(format!(
                    "{}x{} combined with {}x{}",
                    rows, cols, m.rows, m.cols
                )));
            }
            if c.is_zero() {
                continue;
            }
            for (r, col, v) in &m.entries {
                let key = (*col, *r);
                let add = v.mul(c);
                let cur = acc.remove(&key).map_or(add.clone(), |old| old.add(&add));
                if !cur.is_zero() {
                    acc.insert(key, cur);
                }
            }
        }
        let entries = acc.into_iter().map(|((c, r), v)| (r, c, v)).collect();
        Ok(SparseMatrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    /// [A | B]: same row count, columns of B appended after A.
    pub fn hstack(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if a.rows != b.rows {
            return Err(MatrixError::Shape(format!(
                "hstack of {} and {} rows",
                a.rows, b.rows
            )));
        }
        if a.field != b.field {
            return Err(MatrixError::FieldMismatch(a.field, b.field));
        }
        let mut entries = a.entries.clone();
        entries.extend(
            b.entries
                .iter()
                .map(|(r, c, v)| (*r, *c + a.cols as u32, v.clone())),
        );
        // a's entries all precede b's shifted columns, so order is intact
        Ok(SparseMatrix {
            rows: a.rows,
            cols: a.cols + b.cols,
            field: a.field,
            entries,
        })
    }

    /// Append dense columns to the right of the matrix.
    pub fn with_dense_columns(&self, cols: &[Vec<Coef>]) -> Result<SparseMatrix, MatrixError> {
        let mut entries = self.entries.clone();
        for (j, col) in cols.iter().enumerate() {
            if col.len() != self.rows {
                return Err(MatrixError::Shape(format!(
                    "dense column of length {} against {} rows",
                    col.len(),
                    self.rows
                )));
            }
            for (i, v) in col.iter().enumerate() {
                if v.field() != self.field {
                    return Err(MatrixError::FieldMismatch(self.field, v.field()));
                }
                if !v.is_zero() {
                    entries.push((i as u32, (self.cols + j) as u32, v.clone()));
                }
            }
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols + cols.len(),
            field: self.field,
            entries,
        })
    }

    /// Column-major dense copy, for the small solves.
    pub fn dense_columns(&self) -> Vec<Vec<Coef>> {
        let mut out = vec![vec![Coef::zero(self.field); self.rows]; self.cols];
        for (r, c, v) in &self.entries {
            out[*c as usize][*r as usize] = v.clone();
        }
        out
    }

    /// Deterministic JSON form: row-major triplets with stringified scalars.
    pub fn to_json(&self) -> serde_json::Value {
        let mut trip: Vec<(u32, u32, String)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, v.to_string()))
            .collect();
        trip.sort();
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "nnz": trip.len(),
            "triplets": trip.iter().map(|(r, c, v)| json!([r, c, v])).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fi(v: i64) -> Coef {
        Coef::from_i64(FieldSpec::Q, v)
    }

    #[test]
    fn triplets_accumulate_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            FieldSpec::Q,
            vec![(0, 0, fi(2)), (0, 0, fi(-2)), (1, 0, fi(5)), (1, 1, fi(0))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), fi(5));
        assert_eq!(m.get(0, 0), fi(0));
        assert!(SparseMatrix::from_triplets(1, 1, FieldSpec::Q, vec![(1, 0, fi(1))]).is_err());
    }

    #[test]
    fn product_matches_hand_example() {
        let a = SparseMatrix::from_triplets(
            2,
            3,
            FieldSpec::Q,
            vec![(0, 0, fi(1)), (0, 2, fi(2)), (1, 1, fi(-1))],
        )
        .unwrap();
        let b = SparseMatrix::from_triplets(
            3,
            2,
            FieldSpec::Q,
            vec![(0, 0, fi(3)), (2, 0, fi(1)), (1, 1, fi(4))],
        )
        .unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.get(0, 0), fi(5));
        assert_eq!(c.get(1, 1), fi(-4));
        assert_eq!(c.nnz(), 2);
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn stacking_and_dense_round_trip() {
        let a = SparseMatrix::identity(2, FieldSpec::Fp(10007));
        let b = SparseMatrix::zero(2, 1, FieldSpec::Fp(10007));
        let s = SparseMatrix::hstack(&a, &b).unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 3));
        let dense = s.dense_columns();
        assert_eq!(dense[0][0], Coef::one(FieldSpec::Fp(10007)));
        assert!(dense[2].iter().all(|v| v.is_zero()));
        let t = a
            .with_dense_columns(&[vec![
                Coef::from_i64(FieldSpec::Fp(10007), 7),
                Coef::zero(FieldSpec::Fp(10007)),
            ]])
            .unwrap();
        assert_eq!(t.get(0, 2), Coef::from_i64(FieldSpec::Fp(10007), 7));
    }

    #[test]
    fn json_is_row_major_and_stringly_exact() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            FieldSpec::Q,
            vec![(1, 0, Coef::parse("1/3", FieldSpec::Q).unwrap()), (0, 1, fi(-2))],
        )
        .unwrap();
        let j = m.to_json();
        assert_eq!(j["nnz"], 2);
        assert_eq!(j["triplets"][0][2], "-2");
        assert_eq!(j["triplets"][1][2], "1/3");
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SparseMatrix> {
        proptest::collection::vec(
            (0..rows, 0..cols, -4i64..=4),
            0..=(rows * cols),
        )
        .prop_map(move |trip| {
            SparseMatrix::from_triplets(
                rows,
                cols,
                FieldSpec::Q,
                trip.into_iter().map(|(r, c, v)| (r, c, fi(v))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(
            a in arb_matrix(3, 4),
            b in arb_matrix(4, 2),
            c in arb_matrix(2, 3),
        ) {
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn identity_is_neutral(a in arb_matrix(3, 4)) {
            let l = SparseMatrix::identity(3, FieldSpec::Q);
            let r = SparseMatrix::identity(4, FieldSpec::Q);
            prop_assert_eq!(l.mul(&a).unwrap(), a.clone());
            prop_assert_eq!(a.mul(&r).unwrap(), a);
        }

        #[test]
        fn combination_matches_entrywise(
            a in arb_matrix(3, 3),
            b in arb_matrix(3, 3),
            x in -3i64..=3,
            y in -3i64..=3,
        ) {
            let comb = SparseMatrix::linear_combination(&[
                (fi(x), &a),
                (fi(y), &b),
            ]).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    let want = a.get(r, c).mul(&fi(x)).add(&b.get(r, c).mul(&fi(y)));
                    prop_assert_eq!(comb.get(r, c), want);
                }
            }
        }
    }
}
