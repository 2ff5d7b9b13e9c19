//! Normalized bar complexes over the Hecke algebra of B_n, computing
//! Tor_d(1, 1) with the trivial (q-character) module on both sides, and the
//! homological stability comparison map induced by B_{n-1} into B_n.
//!
//! Degree d of the normalized complex is spanned by d-tuples of nonidentity
//! group elements; the differential merges adjacent slots through the
//! augmentation-reduced product and the outer face maps cancel. These
//! complexes grow like (N-1)^d with N = |B_n|, so every entry point takes an
//! explicit work guard and refuses oversized computations with an estimate.

use crate::complexes::ComplexError;
use crate::coxeter::{self, SignedPermutation};
use crate::hecke::HeckeElement;
use crate::homology::{kernel_basis, rank_exact};
use crate::matrix::SparseMatrix;
use crate::scalar::{Coef, ScalarConfig};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on the number of bar-complex columns a single run may build.
pub const DEFAULT_GUARD: u128 = 5_000_000;

#[derive(Debug, Error)]
pub enum BarError {
    #[error("guard exceeded for n={n}, d={d_max}: the bar complex needs about {estimate} columns, over the limit {guard}")]
    GuardExceeded {
        n: usize,
        d_max: usize,
        estimate: u128,
        guard: u128,
    },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// |B_n| = 2^n n! without enumerating anything.
pub fn group_order_b(n: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc.saturating_mul(2 * i);
    }
    acc
}

/// The dominating column count for Tor through degree d_max: (N-1)^(d_max+1).
pub fn bar_columns_estimate(n: usize, d_max: usize) -> u128 {
    let base = group_order_b(n).saturating_sub(1);
    let mut acc: u128 = 1;
    for _ in 0..=d_max {
        acc = acc.saturating_mul(base.max(1));
    }
    acc
}

fn check_guard(n: usize, d_max: usize, guard: u128) -> Result<(), BarError> {
    let estimate = bar_columns_estimate(n, d_max);
    if estimate > guard {
        Err(BarError::GuardExceeded {
            n,
            d_max,
            estimate,
            guard,
        })
    } else {
        Ok(())
    }
}

/// Precomputed data for the normalized bar complex of H(B_n): the
/// nonidentity basis in canonical order and the merged-product table.
pub struct BarContext {
    n: usize,
    cfg: ScalarConfig,
    basis: Vec<SignedPermutation>,
    table: Vec<Vec<(u32, Coef)>>,
}

impl BarContext {
    pub fn new(n: usize, cfg: &ScalarConfig) -> Self {
        let mut basis = coxeter::all_elements(n);
        basis.retain(|g| !g.is_identity());
        let index: BTreeMap<&SignedPermutation, usize> =
            basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let k = basis.len();
        let mut table = Vec::with_capacity(k * k);
        for a in &basis {
            let ta = HeckeElement::t_of(a.clone(), cfg);
            let la = a.length() as i64;
            for b in &basis {
                let tb = HeckeElement::t_of(b.clone(), cfg);
                let lb = b.length() as i64;
                // the normalized product of e_a = T_a - q^{l(a)} and e_b,
                // read off in the e_w coordinates: the T_1 component drops
                let mut coeffs: BTreeMap<usize, Coef> = BTreeMap::new();
                for (w, c) in ta.mul(&tb).terms() {
                    if w.is_identity() {
                        continue;
                    }
                    coeffs.insert(index[w], c.clone());
                }
                for (target, le) in [(b, la), (a, lb)] {
                    let i = index[target];
                    let cur = coeffs
                        .remove(&i)
                        .unwrap_or_else(|| cfg.zero())
                        .sub(&cfg.q_pow(le));
                    if !cur.is_zero() {
                        coeffs.insert(i, cur);
                    }
                }
                table.push(coeffs.into_iter().map(|(i, c)| (i as u32, c)).collect());
            }
        }
        BarContext {
            n,
            cfg: cfg.clone(),
            basis,
            table,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[SignedPermutation] {
        &self.basis
    }

    fn merged(&self, a: usize, b: usize) -> &[(u32, Coef)] {
        &self.table[a * self.basis.len() + b]
    }

    /// dim C_d = (N-1)^d (and 1 in degree 0).
    pub fn dim(&self, d: usize) -> usize {
        self.basis.len().pow(d as u32)
    }

    fn decode(&self, mut idx: usize, d: usize) -> Vec<usize> {
        let k = self.basis.len();
        let mut digits = vec![0usize; d];
        for slot in (0..d).rev() {
            digits[slot] = idx % k;
            idx /= k;
        }
        digits
    }

    fn encode(&self, digits: &[usize]) -> usize {
        let k = self.basis.len();
        digits.iter().fold(0usize, |acc, &w| acc * k + w)
    }

    /// The normalized bar differential out of degree d (d >= 1). The d = 1
    /// map to C_0 = k is zero.
    pub fn differential(&self, d: usize) -> SparseMatrix {
        assert!(d >= 1);
        let rows = self.dim(d - 1);
        let cols = self.dim(d);
        let field = self.cfg.field();
        if d == 1 || self.basis.is_empty() {
            return SparseMatrix::zero(rows, cols, field);
        }
        let mut trips: Vec<(usize, usize, Coef)> = Vec::new();
        for col in 0..cols {
            let digits = self.decode(col, d);
            for i in 1..d {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let sign = Coef::from_i64(field, sign);
                for (prod, c) in self.merged(digits[i - 1], digits[i]) {
                    let mut target = Vec::with_capacity(d - 1);
                    target.extend_from_slice(&digits[..i - 1]);
                    target.push(*prod as usize);
                    target.extend_from_slice(&digits[i + 1..]);
                    trips.push((self.encode(&target), col, c.mul(&sign)));
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols, field, trips)
            .expect("bar differential indices are in range")
    }
}

/// Tor_d(1, 1) over H(B_n) for d = 0..=d_max, by the normalized bar complex.
pub fn tor_dims(
    n: usize,
    cfg: &ScalarConfig,
    d_max: usize,
    guard: u128,
) -> Result<Vec<usize>, BarError> {
    check_guard(n, d_max, guard)?;
    let ctx = BarContext::new(n, cfg);
    let mut ranks = vec![0usize; d_max + 2]; // ranks[d] = rank of d_d
    for d in 1..=d_max + 1 {
        ranks[d] = rank_exact(&ctx.differential(d));
    }
    Ok((0..=d_max)
        .map(|d| ctx.dim(d) - ranks[d] - ranks[d + 1])
        .collect())
}

/// The outcome of comparing Tor_d over H(B_{n-1}) and H(B_n) through the
/// inclusion-induced map.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StabilityReport {
    pub n: usize,
    pub d: usize,
    pub field: String,
    pub q: String,
    pub tor_small: usize,
    pub tor_big: usize,
    pub map_rank: usize,
    pub verdict: String,
    pub stable_range: bool,
}

/// Compute the rank of the induced map Tor_d(H(B_{n-1})) -> Tor_d(H(B_n))
/// and classify it. The map is induced by extending signed permutations by
/// the fixed point n, tuple-wise on the bar complexes.
pub fn stabilization_map(
    n: usize,
    d: usize,
    cfg: &ScalarConfig,
    guard: u128,
) -> Result<StabilityReport, BarError> {
    if n < 1 {
        return Err(BarError::BadParams("stabilization wants n >= 1".into()));
    }
    check_guard(n, d, guard)?;
    let big = BarContext::new(n, cfg);
    let small = BarContext::new(n - 1, cfg);

    // index of each extended small element inside the big basis
    let big_index: BTreeMap<&SignedPermutation, usize> =
        big.basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut ext = Vec::with_capacity(small.basis.len());
    for g in &small.basis {
        let mut images: Vec<i32> = g.images().to_vec();
        images.push(n as i32);
        let e = SignedPermutation::from_images(images).expect("extension is a signed permutation");
        ext.push(big_index[&e]);
    }

    // kernel of the small differential in degree d
    let z_small: Vec<Vec<Coef>> = if d == 0 {
        vec![vec![cfg.one()]]
    } else {
        kernel_basis(&small.differential(d))
    };

    let d_next_small_rank = rank_exact(&small.differential(d + 1));
    let tor_small = z_small.len() - d_next_small_rank;

    let b_big = big.differential(d + 1);
    let rank_b_big = rank_exact(&b_big);
    let rank_d_big = if d == 0 {
        0
    } else {
        rank_exact(&big.differential(d))
    };
    let tor_big = big.dim(d) - rank_d_big - rank_b_big;

    // push each kernel vector through the tuple-wise inclusion
    let mut phi_cols = Vec::with_capacity(z_small.len());
    for z in &z_small {
        let mut col = vec![cfg.zero(); big.dim(d)];
        for (idx, c) in z.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let digits = small.decode(idx, d);
            let mapped: Vec<usize> = digits.iter().map(|&w| ext[w]).collect();
            col[big.encode(&mapped)] = c.clone();
        }
        phi_cols.push(col);
    }
    let augmented = b_big
        .with_dense_columns(&phi_cols)
        .expect("phi columns match the big bar dimension");
    let map_rank = rank_exact(&augmented) - rank_b_big;

    let verdict = if map_rank == tor_small && map_rank == tor_big {
        "isomorphism"
    } else if map_rank == tor_small {
        "injective-only"
    } else if map_rank == tor_big {
        "surjective-only"
    } else {
        "neither"
    };
    Ok(StabilityReport {
        n,
        d,
        field: cfg.field().to_string(),
        q: cfg.q().to_string(),
        tor_small,
        tor_big,
        map_rank,
        verdict: verdict.to_string(),
        stable_range: 2 * d <= n - 1,
    })
}
