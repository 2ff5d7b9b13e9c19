//! Exact linear algebra over the run field and homology of labelled
//! complexes. Ranks over the rationals use fraction-free sparse elimination
//! on integer-cleared columns; ranks over F_p use modular elimination. A
//! dense reduced-echelon routine doubles as an independent oracle in the
//! tests and supplies kernel bases for the small solves.

use crate::complexes::{ComplexError, LabeledComplex};
use crate::matrix::SparseMatrix;
use crate::scalar::{Coef, FieldSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Rank of a sparse matrix over its field of definition.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    match m.field() {
        FieldSpec::Q => rank_q(m),
        FieldSpec::Fp(p) => rank_fp(m, p),
    }
}

fn strip_content(v: &mut Vec<(u32, BigInt)>) {
    if v.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, c) in v.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() {
        for (_, c) in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    if v[0].1.is_negative() {
        for (_, c) in v.iter_mut() {
            *c = -&*c;
        }
    }
}

/// col * b - piv * a, where a and b are the shared-lead-row coefficients;
/// the lead cancels exactly. Both inputs are sorted by row.
fn cross_eliminate(col: &[(u32, BigInt)], piv: &[(u32, BigInt)]) -> Vec<(u32, BigInt)> {
    let a = &col[0].1;
    let b = &piv[0].1;
    let mut out = Vec::with_capacity(col.len() + piv.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < col.len() || j < piv.len() {
        let take_col = j >= piv.len() || (i < col.len() && col[i].0 < piv[j].0);
        let take_piv = i >= col.len() || (j < piv.len() && piv[j].0 < col[i].0);
        let (row, val) = if take_col {
            let e = (&col[i].1 * b, col[i].0);
            i += 1;
            (e.1, e.0)
        } else if take_piv {
            let e = (-(&piv[j].1 * a), piv[j].0);
            j += 1;
            (e.1, e.0)
        } else {
            let v = &col[i].1 * b - &piv[j].1 * a;
            let row = col[i].0;
            i += 1;
            j += 1;
            (row, v)
        };
        if !val.is_zero() {
            out.push((row, val));
        }
    }
    out
}

fn rank_q(m: &SparseMatrix) -> usize {
    let mut cols: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let col = m.col(j);
        let mut l = BigInt::one();
        for (_, _, v) in col {
            let r = v.as_rational().expect("rank_q over a rational matrix");
            l = l.lcm(r.denom());
        }
        let mut out: Vec<(u32, BigInt)> = col
            .iter()
            .map(|(r, _, v)| {
                let rat = v.as_rational().unwrap();
                (*r, rat.numer() * (&l / rat.denom()))
            })
            .collect();
        strip_content(&mut out);
        cols.push(out);
    }
    // light fill-in heuristic: short columns first
    let mut order: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    order.sort_by_key(|&j| (cols[j].len(), j));
    let mut pivots: BTreeMap<u32, Vec<(u32, BigInt)>> = BTreeMap::new();
    let mut rank = 0usize;
    for j in order {
        let mut col = std::mem::take(&mut cols[j]);
        loop {
            strip_content(&mut col);
            let Some(&(lead, _)) = col.first() else { break };
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, col);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    col = cross_eliminate(&col, piv);
                }
            }
        }
    }
    rank
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, base, p);
        }
        base = fp_mul(base, base, p);
        e >>= 1;
    }
    acc
}

fn rank_fp(m: &SparseMatrix, p: u64) -> usize {
    let mut cols: Vec<Vec<(u32, u64)>> = vec![Vec::new(); m.cols()];
    for (r, c, v) in m.entries() {
        let val = match v {
            Coef::Fp { v, .. } => *v,
            Coef::Rat(_) => unreachable!("rank_fp over a modular matrix"),
        };
        if val % p != 0 {
            cols[*c as usize].push((*r, val % p));
        }
    }
    let mut order: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    order.sort_by_key(|&j| (cols[j].len(), j));
    // pivots stored with lead coefficient 1
    let mut pivots: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    let mut rank = 0usize;
    for j in order {
        let mut col = std::mem::take(&mut cols[j]);
        loop {
            let Some(&(lead, a)) = col.first() else { break };
            match pivots.get(&lead) {
                None => {
                    let inv = fp_inv(a, p);
                    for (_, v) in col.iter_mut() {
                        *v = fp_mul(*v, inv, p);
                    }
                    pivots.insert(lead, col);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    // col := col - a * piv
                    let mut out = Vec::with_capacity(col.len() + piv.len());
                    let (mut i, mut k) = (0usize, 0usize);
                    while i < col.len() || k < piv.len() {
                        if k >= piv.len() || (i < col.len() && col[i].0 < piv[k].0) {
                            out.push(col[i].clone());
                            i += 1;
                        } else if i >= col.len() || piv[k].0 < col[i].0 {
                            let v = p - fp_mul(a, piv[k].1, p);
                            if v % p != 0 {
                                out.push((piv[k].0, v % p));
                            }
                            k += 1;
                        } else {
                            let v = (col[i].1 + p - fp_mul(a, piv[k].1, p)) % p;
                            if v != 0 {
                                out.push((col[i].0, v));
                            }
                            i += 1;
                            k += 1;
                        }
                    }
                    col = out;
                }
            }
        }
    }
    rank
}

/// Dense reduced row echelon form; returns (rank, pivot columns, rref rows).
fn dense_rref(mut rows: Vec<Vec<Coef>>, field: FieldSpec) -> (usize, Vec<usize>, Vec<Vec<Coef>>) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for c in 0..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    let sub = rows[rank][c].mul(&f);
                    rows[r][c] = rows[r][c].sub(&sub);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    let _ = field;
    (rank, pivot_cols, rows)
}

fn dense_rows(m: &SparseMatrix) -> Vec<Vec<Coef>> {
    let mut rows = vec![vec![Coef::zero(m.field()); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        rows[*r as usize][*c as usize] = v.clone();
    }
    rows
}

/// Rank by dense reduced echelon form; the independent oracle for
/// [`rank_exact`] and the workhorse behind [`kernel_basis`].
pub fn rank_dense(m: &SparseMatrix) -> usize {
    dense_rref(dense_rows(m), m.field()).0
}

/// A basis of the kernel, as dense coordinate vectors of length `m.cols()`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Coef>> {
    let field = m.field();
    let ncols = m.cols();
    let (rank, pivot_cols, rref) = dense_rref(dense_rows(m), field);
    let pivot_of_col: BTreeMap<usize, usize> = pivot_cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut basis = Vec::with_capacity(ncols - rank);
    for free in 0..ncols {
        if pivot_of_col.contains_key(&free) {
            continue;
        }
        let mut v = vec![Coef::zero(field); ncols];
        v[free] = Coef::one(field);
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = rref[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// The homology of one complex: dimensions, boundary ranks, and Betti
/// numbers per degree, plus the Euler characteristic cross-check.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HomologyReport {
    pub complex: String,
    pub n: usize,
    pub field: String,
    pub q: Option<String>,
    pub dims: BTreeMap<i64, usize>,
    pub ranks: BTreeMap<i64, usize>,
    pub betti: BTreeMap<i64, usize>,
    pub euler_dims: i64,
    pub euler_betti: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl HomologyReport {
    pub fn betti_at(&self, d: i64) -> usize {
        self.betti.get(&d).copied().unwrap_or(0)
    }
}

/// Compute homology over the complex's field. Verifies that the boundary
/// squares to zero and that the per-degree ranks are consistent with the
/// dimensions before reporting.
pub fn homology_report(c: &LabeledComplex) -> Result<HomologyReport, ComplexError> {
    c.check_dd_zero()?;
    let degs: Vec<i64> = (c.lo + 1..=c.hi).collect();
    let ranks_v: Vec<usize> = degs
        .par_iter()
        .map(|&d| rank_exact(c.boundary_from(d).unwrap()))
        .collect();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for (d, r) in degs.iter().zip(&ranks_v) {
        ranks.insert(*d, *r);
    }
    let rank_out = |d: i64| -> usize { ranks.get(&d).copied().unwrap_or(0) };
    let mut dims = BTreeMap::new();
    let mut betti = BTreeMap::new();
    for d in c.degrees() {
        let dim = c.dim(d);
        let used = rank_out(d) + rank_out(d + 1);
        if used > dim {
            return Err(ComplexError::Integrity(format!(
                "ranks exceed the dimension in degree {d}: {used} > {dim}"
            )));
        }
        dims.insert(d, dim);
        betti.insert(d, dim - used);
    }
    let signed_sum = |m: &BTreeMap<i64, usize>| -> i64 {
        m.iter()
            .map(|(d, v)| if d.rem_euclid(2) == 0 { *v as i64 } else { -(*v as i64) })
            .sum()
    };
    let euler_dims = signed_sum(&dims);
    let euler_betti = signed_sum(&betti);
    if euler_dims != euler_betti {
        return Err(ComplexError::Integrity(format!(
            "Euler characteristic mismatch: {euler_dims} from dimensions, {euler_betti} from Betti numbers"
        )));
    }
    Ok(HomologyReport {
        complex: c.kind.to_string(),
        n: c.n,
        field: c.field.to_string(),
        q: c.q.as_ref().map(|q| q.to_string()),
        dims,
        ranks,
        betti,
        euler_dims,
        euler_betti,
        elapsed_ms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_d_complex, build_word_complex, WeylType};
    use crate::scalar::ScalarConfig;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qi(v: i64) -> Coef {
        Coef::from_i64(FieldSpec::Q, v)
    }

    #[test]
    fn rank_basics() {
        let id = SparseMatrix::identity(5, FieldSpec::Q);
        assert_eq!(rank_exact(&id), 5);
        assert_eq!(rank_dense(&id), 5);
        let z = SparseMatrix::zero(4, 7, FieldSpec::Fp(10007));
        assert_eq!(rank_exact(&z), 0);
        // rank 1: outer product
        let m = SparseMatrix::from_triplets(
            3,
            3,
            FieldSpec::Q,
            (0..3).flat_map(|r| (0..3).map(move |c| (r, c, qi(((r + 1) * (c + 2)) as i64)))),
        )
        .unwrap();
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(rank_dense(&m), 1);
    }

    #[test]
    fn rank_matches_dense_oracle_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for field in [FieldSpec::Q, FieldSpec::Fp(10007)] {
            for _ in 0..12 {
                let rows = rng.gen_range(1..=60);
                let cols = rng.gen_range(1..=80);
                let fill = rng.gen_range(1..=3 * (rows + cols));
                let trips: Vec<(usize, usize, Coef)> = (0..fill)
                    .map(|_| {
                        (
                            rng.gen_range(0..rows),
                            rng.gen_range(0..cols),
                            Coef::from_i64(field, rng.gen_range(-3i64..=3)),
                        )
                    })
                    .collect();
                let m = SparseMatrix::from_triplets(rows, cols, field, trips).unwrap();
                assert_eq!(rank_exact(&m), rank_dense(&m));
            }
        }
        // with honest fractions in the entries
        let m = SparseMatrix::from_triplets(
            3,
            4,
            FieldSpec::Q,
            vec![
                (0, 0, Coef::parse("1/2", FieldSpec::Q).unwrap()),
                (0, 1, Coef::parse("1/3", FieldSpec::Q).unwrap()),
                (1, 0, Coef::parse("3/2", FieldSpec::Q).unwrap()),
                (1, 1, qi(2)),
                (2, 3, Coef::parse("-5/7", FieldSpec::Q).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(rank_exact(&m), rank_dense(&m));
        assert_eq!(rank_exact(&m), 3);
    }

    proptest! {
        #[test]
        fn rank_agrees_with_oracle(
            trips in proptest::collection::vec((0usize..8, 0usize..10, -4i64..=4), 0..40)
        ) {
            let m = SparseMatrix::from_triplets(
                8,
                10,
                FieldSpec::Q,
                trips.into_iter().map(|(r, c, v)| (r, c, qi(v))),
            )
            .unwrap();
            prop_assert_eq!(rank_exact(&m), rank_dense(&m));
        }
    }

    #[test]
    fn kernel_vectors_are_in_the_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=10);
            let fill = rng.gen_range(0..=rows * cols);
            let trips: Vec<(usize, usize, Coef)> = (0..fill)
                .map(|_| {
                    (
                        rng.gen_range(0..rows),
                        rng.gen_range(0..cols),
                        qi(rng.gen_range(-3i64..=3)),
                    )
                })
                .collect();
            let m = SparseMatrix::from_triplets(rows, cols, FieldSpec::Q, trips).unwrap();
            let kernel = kernel_basis(&m);
            assert_eq!(kernel.len() + rank_exact(&m), cols);
            for v in &kernel {
                // multiply m by v densely
                for r in 0..rows {
                    let mut acc = Coef::zero(FieldSpec::Q);
                    for c in 0..cols {
                        acc = acc.add(&m.get(r, c).mul(&v[c]));
                    }
                    assert!(acc.is_zero());
                }
            }
            // independence: the kernel matrix has full column rank
            if !kernel.is_empty() {
                let km = SparseMatrix::zero(cols, 0, FieldSpec::Q)
                    .with_dense_columns(&kernel)
                    .unwrap();
                assert_eq!(rank_exact(&km), kernel.len());
            }
        }
    }

    #[test]
    fn word_complexes_are_acyclic_in_the_stable_range() {
        for n in 1..=4usize {
            let c = build_word_complex(n, false, FieldSpec::Q).unwrap();
            let rep = homology_report(&c).unwrap();
            for d in -1..=(n as i64 - 2) {
                assert_eq!(rep.betti_at(d), 0, "C({n}) degree {d}");
            }
            // the top Betti number of C(n) is the derangement count
            let derangements = [0usize, 0, 1, 2, 9];
            assert_eq!(rep.betti_at(n as i64 - 1), derangements[n]);
        }
        for n in 1..=3usize {
            let c = build_word_complex(n, true, FieldSpec::Q).unwrap();
            let rep = homology_report(&c).unwrap();
            for d in -1..=(n as i64 - 2) {
                assert_eq!(rep.betti_at(d), 0, "Cpm({n}) degree {d}");
            }
        }
    }

    #[test]
    fn module_complex_homology_matches_signed_derangements() {
        // top Betti numbers of Dpm(n): 1, 5, 29 for n = 1, 2, 3; all lower
        // degrees vanish (acyclicity)
        let expected = [0usize, 1, 5, 29];
        for cfg in [
            ScalarConfig::rational("1").unwrap(),
            ScalarConfig::rational("1/3").unwrap(),
            ScalarConfig::rational("-1").unwrap(),
            ScalarConfig::prime(10007, "2").unwrap(),
            ScalarConfig::prime(10007, "10006").unwrap(),
        ] {
            for n in 1..=3usize {
                let d = build_d_complex(n, WeylType::B, &cfg).unwrap();
                let rep = homology_report(&d).unwrap();
                for deg in -1..=(n as i64 - 2) {
                    assert_eq!(rep.betti_at(deg), 0, "Dpm({n}) degree {deg} at q={:?}", cfg.q());
                }
                assert_eq!(rep.betti_at(n as i64 - 1), expected[n]);
            }
        }
        // type A for comparison: 0, 1, 2 on top
        let cfg = ScalarConfig::rational("2").unwrap();
        let expected_a = [0usize, 0, 1, 2];
        for n in 1..=3usize {
            let d = build_d_complex(n, WeylType::A, &cfg).unwrap();
            let rep = homology_report(&d).unwrap();
            assert_eq!(rep.betti_at(n as i64 - 1), expected_a[n]);
        }
    }

    #[test]
    fn report_shape_and_euler() {
        let c = build_word_complex(3, true, FieldSpec::Q).unwrap();
        let rep = homology_report(&c).unwrap();
        assert_eq!(rep.euler_dims, rep.euler_betti);
        assert_eq!(rep.complex, "Cpm");
        assert_eq!(rep.q, None);
        let js = serde_json::to_value(&rep).unwrap();
        assert!(js["betti"]["-1"].is_number());
        assert!(js.get("elapsed_ms").is_none());
    }
}
