//! The hyperoctahedral group B_n as signed permutations, together with the
//! Coxeter-theoretic combinatorics the rest of the crate is built on: lengths
//! and reduced words, descent sets, parabolic subgroups, distinguished coset
//! and double coset representatives, and the Mackey partition.
//!
//! Conventions, fixed once and inherited everywhere:
//! - elements act on the left of points, and composition is (g·h)(i) = g(h(i));
//! - the generators are u (negates the point 1) and s_i (swaps i and i+1);
//! - u_m = u s_1 … s_{m-1} sends m to -1 and shifts 1..m-1 up by one.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("generator {symbol} is out of range for rank {rank}")]
    RankViolation { symbol: String, rank: usize },
    #[error("images {0:?} are not a signed permutation")]
    InvalidImages(Vec<i32>),
    #[error("entries {0:?} are not strictly decreasing positive integers")]
    InvalidMVector(Vec<usize>),
    #[error("cannot parse generator symbol from {0:?}")]
    BadSymbol(String),
}

/// A Coxeter generator of B_n: `U` is the sign flip at position 1, `S(i)` the
/// adjacent transposition (i, i+1). Type-A elements use only the `S(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorSymbol {
    U,
    S(usize),
}

impl GeneratorSymbol {
    pub fn valid_for_rank(&self, n: usize) -> bool {
        match self {
            GeneratorSymbol::U => n >= 1,
            GeneratorSymbol::S(i) => *i >= 1 && *i + 1 <= n,
        }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSymbol::U => write!(f, "u"),
            GeneratorSymbol::S(i) => write!(f, "s{i}"),
        }
    }
}

impl FromStr for GeneratorSymbol {
    type Err = CoxeterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "u" {
            return Ok(GeneratorSymbol::U);
        }
        if let Some(rest) = s.strip_prefix('s') {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 {
                    return Ok(GeneratorSymbol::S(i));
                }
            }
        }
        Err(CoxeterError::BadSymbol(s.to_string()))
    }
}

/// A word in the generators, not necessarily reduced. Serialized as
/// space-separated tokens, e.g. "u s1 s2".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxWord {
    pub letters: Vec<GeneratorSymbol>,
    pub rank: usize,
}

impl CoxWord {
    pub fn new(letters: Vec<GeneratorSymbol>, rank: usize) -> Result<Self, CoxeterError> {
        for l in &letters {
            if !l.valid_for_rank(rank) {
                return Err(CoxeterError::RankViolation {
                    symbol: l.to_string(),
                    rank,
                });
            }
        }
        Ok(CoxWord { letters, rank })
    }

    pub fn empty(rank: usize) -> Self {
        CoxWord { letters: Vec::new(), rank }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn parse(s: &str, rank: usize) -> Result<Self, CoxeterError> {
        let letters = s
            .split_whitespace()
            .map(GeneratorSymbol::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        CoxWord::new(letters, rank)
    }
}

impl fmt::Display for CoxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// Which side of a product or coset an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An element of B_n in one-line notation: `images[i-1]` is the signed image
/// of i. Sign-free elements form the symmetric group 𝔖_n inside B_n.
///
/// The derived `Ord` is plain lexicographic order on the image vector and is
/// only used for map keys; the canonical basis order used throughout the
/// complexes is [`canonical_key`](Self::canonical_key) = (length, images).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    images: Vec<i32>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            images: (1..=n as i32).collect(),
        }
    }

    pub fn from_images(images: Vec<i32>) -> Result<Self, CoxeterError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let a = v.unsigned_abs() as usize;
            if v == 0 || a == 0 || a > n || seen[a - 1] {
                return Err(CoxeterError::InvalidImages(images));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// Image of the (1-based, positive) point i.
    pub fn image(&self, i: usize) -> i32 {
        self.images[i - 1]
    }

    /// Sign-equivariant application to a signed point.
    pub fn apply(&self, v: i32) -> i32 {
        let img = self.images[(v.unsigned_abs() as usize) - 1];
        if v > 0 {
            img
        } else {
            -img
        }
    }

    /// (g·h)(i) = g(h(i)).
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        debug_assert_eq!(self.rank(), other.rank());
        SignedPermutation {
            images: (1..=self.rank()).map(|i| self.apply(other.image(i))).collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.rank();
        let mut images = vec![0; n];
        for i in 1..=n {
            let v = self.image(i);
            if v > 0 {
                images[v as usize - 1] = i as i32;
            } else {
                images[(-v) as usize - 1] = -(i as i32);
            }
        }
        SignedPermutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i as i32 + 1)
    }

    /// True iff no image is negative, i.e. the element lies in 𝔖_n ⊆ B_n.
    pub fn is_unsigned(&self) -> bool {
        self.images.iter().all(|&v| v > 0)
    }

    /// Multiply by a generator on the given side.
    pub fn mul_gen(&self, s: GeneratorSymbol, side: Side) -> SignedPermutation {
        let mut images = self.images.clone();
        match (side, s) {
            (Side::Right, GeneratorSymbol::U) => images[0] = -images[0],
            (Side::Right, GeneratorSymbol::S(i)) => images.swap(i - 1, i),
            (Side::Left, GeneratorSymbol::U) => {
                for v in images.iter_mut() {
                    if v.abs() == 1 {
                        *v = -*v;
                    }
                }
            }
            (Side::Left, GeneratorSymbol::S(i)) => {
                let (a, b) = (i as i32, i as i32 + 1);
                for v in images.iter_mut() {
                    if v.abs() == a {
                        *v = v.signum() * b;
                    } else if v.abs() == b {
                        *v = v.signum() * a;
                    }
                }
            }
        }
        SignedPermutation { images }
    }

    /// O(1) right-descent test: s_i iff g(i) > g(i+1), u iff g(1) < 0.
    /// Validated against Cayley-graph BFS distances in the tests.
    pub fn is_right_descent(&self, s: GeneratorSymbol) -> bool {
        match s {
            GeneratorSymbol::U => self.images[0] < 0,
            GeneratorSymbol::S(i) => self.images[i - 1] > self.images[i],
        }
    }

    pub fn is_left_descent(&self, s: GeneratorSymbol) -> bool {
        self.inverse().is_right_descent(s)
    }

    /// The descent set on the requested side, in generator order (u, s1, s2, …).
    pub fn descents(&self, side: Side) -> Vec<GeneratorSymbol> {
        let g = match side {
            Side::Right => self.clone(),
            Side::Left => self.inverse(),
        };
        generators(self.rank())
            .into_iter()
            .filter(|&s| g.is_right_descent(s))
            .collect()
    }

    /// Coxeter length, by greedy descent stripping.
    pub fn length(&self) -> usize {
        let mut g = self.clone();
        let mut l = 0;
        loop {
            match first_right_descent(&g) {
                Some(s) => {
                    g = g.mul_gen(s, Side::Right);
                    l += 1;
                }
                None => return l,
            }
        }
    }

    /// A reduced word for the element (deterministic: always strips the first
    /// descent in generator order).
    pub fn reduced_word(&self) -> CoxWord {
        let mut g = self.clone();
        let mut stripped = Vec::new();
        while let Some(s) = first_right_descent(&g) {
            g = g.mul_gen(s, Side::Right);
            stripped.push(s);
        }
        stripped.reverse();
        CoxWord {
            letters: stripped,
            rank: self.rank(),
        }
    }

    /// Sort key realizing the canonical basis order: (length, images).
    pub fn canonical_key(&self) -> (usize, Vec<i32>) {
        (self.length(), self.images.clone())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", toks.join(","))
    }
}

fn first_right_descent(g: &SignedPermutation) -> Option<GeneratorSymbol> {
    if g.images[0] < 0 {
        return Some(GeneratorSymbol::U);
    }
    for i in 1..g.rank() {
        if g.images[i - 1] > g.images[i] {
            return Some(GeneratorSymbol::S(i));
        }
    }
    None
}

/// The generating set of B_n in canonical order: u, s_1, …, s_{n-1}.
pub fn generators(n: usize) -> Vec<GeneratorSymbol> {
    let mut out = vec![GeneratorSymbol::U];
    out.extend((1..n).map(GeneratorSymbol::S));
    out
}

/// Evaluate a word to a group element, multiplying letters left to right.
pub fn word_to_perm(w: &CoxWord) -> Result<SignedPermutation, CoxeterError> {
    let mut g = SignedPermutation::identity(w.rank);
    for &l in &w.letters {
        if !l.valid_for_rank(w.rank) {
            return Err(CoxeterError::RankViolation {
                symbol: l.to_string(),
                rank: w.rank,
            });
        }
        g = g.mul_gen(l, Side::Right);
    }
    Ok(g)
}

pub fn is_reduced(w: &CoxWord) -> Result<bool, CoxeterError> {
    let g = word_to_perm(w)?;
    Ok(g.length() == w.len())
}

/// All of B_n (or its 𝔖_n part), in canonical (length, images) order.
pub fn all_elements(n: usize) -> Vec<SignedPermutation> {
    let mut perms = Vec::new();
    let mut cur = Vec::with_capacity(n);
    build_perms(n, &mut cur, &mut perms, true);
    sort_canonical(&mut perms);
    perms
}

pub fn symmetric_elements(n: usize) -> Vec<SignedPermutation> {
    let mut perms = Vec::new();
    let mut cur = Vec::with_capacity(n);
    build_perms(n, &mut cur, &mut perms, false);
    sort_canonical(&mut perms);
    perms
}

fn build_perms(n: usize, cur: &mut Vec<i32>, out: &mut Vec<SignedPermutation>, signed: bool) {
    if cur.len() == n {
        out.push(SignedPermutation { images: cur.clone() });
        return;
    }
    for v in 1..=n as i32 {
        if cur.iter().any(|&c| c.abs() == v) {
            continue;
        }
        cur.push(v);
        build_perms(n, cur, out, signed);
        cur.pop();
        if signed {
            cur.push(-v);
            build_perms(n, cur, out, signed);
            cur.pop();
        }
    }
}

pub fn sort_canonical(v: &mut [SignedPermutation]) {
    v.sort_by_cached_key(|g| g.canonical_key());
}

/// A subset J of the generating set, defining the parabolic subgroup W_J.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicSpec {
    gens: BTreeSet<GeneratorSymbol>,
}

impl ParabolicSpec {
    pub fn new(gens: BTreeSet<GeneratorSymbol>) -> Self {
        ParabolicSpec { gens }
    }

    pub fn empty() -> Self {
        ParabolicSpec { gens: BTreeSet::new() }
    }

    /// Generators of B_k inside B_n: {u, s_1, …, s_{k-1}}. B_0 is trivial.
    pub fn type_b(k: usize) -> Self {
        let mut gens = BTreeSet::new();
        if k >= 1 {
            gens.insert(GeneratorSymbol::U);
            for i in 1..k {
                gens.insert(GeneratorSymbol::S(i));
            }
        }
        ParabolicSpec { gens }
    }

    /// Generators of a shifted copy of 𝔖_k: {s_{1+t}, …, s_{k-1+t}}.
    pub fn type_a(k: usize, t: usize) -> Self {
        let mut gens = BTreeSet::new();
        for i in 1..k {
            gens.insert(GeneratorSymbol::S(i + t));
        }
        ParabolicSpec { gens }
    }

    pub fn gens(&self) -> &BTreeSet<GeneratorSymbol> {
        &self.gens
    }

    pub fn contains(&self, s: GeneratorSymbol) -> bool {
        self.gens.contains(&s)
    }

    pub fn valid_for_rank(&self, n: usize) -> bool {
        self.gens.iter().all(|s| s.valid_for_rank(n))
    }
}

/// (J, ∅)- or (∅, J)-reducedness: no descent from J on the given side. For
/// `side = Both`-like double tests use [`is_jk_reduced`].
pub fn is_j_reduced(g: &SignedPermutation, j: &ParabolicSpec, side: Side) -> bool {
    match side {
        Side::Left => {
            let inv = g.inverse();
            j.gens.iter().all(|&s| !inv.is_right_descent(s))
        }
        Side::Right => j.gens.iter().all(|&s| !g.is_right_descent(s)),
    }
}

/// The (J, K)-reduced test: no left descent in J and no right descent in K.
pub fn is_jk_reduced(g: &SignedPermutation, j: &ParabolicSpec, k: &ParabolicSpec) -> bool {
    is_j_reduced(g, j, Side::Left) && is_j_reduced(g, k, Side::Right)
}

/// Distinguished coset representatives, by filtering the full group.
///
/// `Side::Right` refers to the right cosets W_J g (so the quotient W_J\W) and
/// returns X_J, the (J, ∅)-reduced elements; `Side::Left` refers to the left
/// cosets g W_J (the quotient W/W_J) and returns X_J^{-1}.
pub fn coset_reps(n: usize, j: &ParabolicSpec, side: Side) -> Vec<SignedPermutation> {
    let filter_side = match side {
        Side::Right => Side::Left,
        Side::Left => Side::Right,
    };
    all_elements(n)
        .into_iter()
        .filter(|g| is_j_reduced(g, j, filter_side))
        .collect()
}

/// Distinguished double coset representatives X_JK = X_J ∩ X_K^{-1}.
pub fn double_coset_reps(n: usize, j: &ParabolicSpec, k: &ParabolicSpec) -> Vec<SignedPermutation> {
    all_elements(n)
        .into_iter()
        .filter(|g| is_jk_reduced(g, j, k))
        .collect()
}

/// Elements of the parabolic subgroup W_J, in canonical order.
pub fn parabolic_elements(n: usize, j: &ParabolicSpec) -> Vec<SignedPermutation> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let id = SignedPermutation::identity(n);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for &s in &j.gens {
            let h = g.mul_gen(s, Side::Right);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    sort_canonical(&mut out);
    out
}

/// Length-additive factorization across a parabolic: for `Side::Right`
/// (cosets W_J g) returns (z, x) with g = z·x, z ∈ W_J, x ∈ X_J; for
/// `Side::Left` (cosets g W_J) returns (z, x) with g = x·z, x ∈ X_J^{-1}.
pub fn coset_factorize(
    g: &SignedPermutation,
    j: &ParabolicSpec,
    side: Side,
) -> (SignedPermutation, SignedPermutation) {
    match side {
        Side::Right => {
            let mut x = g.clone();
            let mut letters = Vec::new();
            loop {
                let d = j.gens.iter().copied().find(|&s| x.is_left_descent(s));
                match d {
                    Some(s) => {
                        x = x.mul_gen(s, Side::Left);
                        letters.push(s);
                    }
                    None => break,
                }
            }
            // g = (s_1 s_2 … s_k)·x for strips in order, so z is the product
            // of the stripped letters left to right.
            let mut z = SignedPermutation::identity(g.rank());
            for &s in &letters {
                z = z.mul_gen(s, Side::Right);
            }
            (z, x)
        }
        Side::Left => {
            let mut x = g.clone();
            let mut letters = Vec::new();
            loop {
                let d = j.gens.iter().copied().find(|&s| x.is_right_descent(s));
                match d {
                    Some(s) => {
                        x = x.mul_gen(s, Side::Right);
                        letters.push(s);
                    }
                    None => break,
                }
            }
            // g = x·(s_k … s_1): stripped letters recompose in reverse.
            let mut z = SignedPermutation::identity(g.rank());
            for &s in letters.iter().rev() {
                z = z.mul_gen(s, Side::Right);
            }
            (z, x)
        }
    }
}

/// Only the length of the parabolic part of the `Side::Left` factorization,
/// which is all the module projection in the complexes needs.
pub fn coset_strip_right(g: &SignedPermutation, j: &ParabolicSpec) -> (SignedPermutation, usize) {
    let mut x = g.clone();
    let mut k = 0;
    loop {
        let d = j.gens.iter().copied().find(|&s| x.is_right_descent(s));
        match d {
            Some(s) => {
                x = x.mul_gen(s, Side::Right);
                k += 1;
            }
            None => return (x, k),
        }
    }
}

/// The Mackey partition of X_J into blocks d·X^K_{J^d ∩ K} over d ∈ X_JK,
/// with the conjugation convention g^d = d^{-1} g d.
pub fn mackey_partition(
    n: usize,
    j: &ParabolicSpec,
    k: &ParabolicSpec,
) -> Vec<(SignedPermutation, Vec<SignedPermutation>)> {
    let k_elems = parabolic_elements(n, k);
    double_coset_reps(n, j, k)
        .into_iter()
        .map(|d| {
            let dinv = d.inverse();
            let mut jdk = BTreeSet::new();
            for &jg in j.gens.iter() {
                let conj = dinv
                    .compose(&SignedPermutation::identity(n).mul_gen(jg, Side::Right))
                    .compose(&d);
                for &kg in k.gens.iter() {
                    if conj == SignedPermutation::identity(n).mul_gen(kg, Side::Right) {
                        jdk.insert(kg);
                    }
                }
            }
            let spec = ParabolicSpec::new(jdk);
            let mut block: Vec<SignedPermutation> = k_elems
                .iter()
                .filter(|g| is_j_reduced(g, &spec, Side::Left))
                .map(|x| d.compose(x))
                .collect();
            sort_canonical(&mut block);
            (d, block)
        })
        .collect()
}

/// A strictly decreasing vector m_1 > m_2 > … > m_t ≥ 1 indexing the coset
/// representatives v(m); the empty vector is the identity. Serialized "[3,1]".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MVector {
    entries: Vec<usize>,
}

impl MVector {
    pub fn new(entries: Vec<usize>) -> Result<Self, CoxeterError> {
        let ok = entries.windows(2).all(|w| w[0] > w[1]) && entries.iter().all(|&e| e >= 1);
        if ok {
            Ok(MVector { entries })
        } else {
            Err(CoxeterError::InvalidMVector(entries))
        }
    }

    pub fn empty() -> Self {
        MVector { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn t(&self) -> usize {
        self.entries.len()
    }

    /// Leading entry m_1, or 0 for the empty vector.
    pub fn m1(&self) -> usize {
        self.entries.first().copied().unwrap_or(0)
    }

    /// The shifted vector m + c.
    pub fn shift(&self, c: usize) -> MVector {
        MVector {
            entries: self.entries.iter().map(|&e| e + c).collect(),
        }
    }
}

impl fmt::Display for MVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", toks.join(","))
    }
}

/// u_m = u s_1 s_2 … s_{m-1}: shifts 1..m-1 up by one and sends m to -1.
pub fn u_m_elem(n: usize, m: usize) -> Result<SignedPermutation, CoxeterError> {
    if m < 1 || m > n {
        return Err(CoxeterError::RankViolation {
            symbol: format!("u_{m}"),
            rank: n,
        });
    }
    let mut g = SignedPermutation::identity(n).mul_gen(GeneratorSymbol::U, Side::Right);
    for i in 1..m {
        g = g.mul_gen(GeneratorSymbol::S(i), Side::Right);
    }
    Ok(g)
}

/// v(m) = u_{m_1} u_{m_2} … u_{m_t}: sends m_i to -i.
pub fn v_of(n: usize, m: &MVector) -> Result<SignedPermutation, CoxeterError> {
    let mut g = SignedPermutation::identity(n);
    for &mi in m.entries() {
        g = g.compose(&u_m_elem(n, mi)?);
    }
    Ok(g)
}

/// Read the signed injective word (g(n-r), …, g(n)) and return the 1-based
/// positions of its negative letters, in decreasing order.
pub fn negative_profile(g: &SignedPermutation, r: i64) -> MVector {
    let n = g.rank() as i64;
    debug_assert!(r >= -1 && r <= n - 1);
    let mut entries = Vec::new();
    for i in (1..=(r + 1)).rev() {
        if g.image((n - r - 1 + i) as usize) < 0 {
            entries.push(i as usize);
        }
    }
    MVector { entries }
}

/// Every reduced word of g, by peeling right descents. The count grows fast
/// with the length; intended for small ranks in tests and identity suites.
pub fn all_reduced_words(g: &SignedPermutation) -> Vec<CoxWord> {
    fn rec(g: &SignedPermutation) -> Vec<Vec<GeneratorSymbol>> {
        if g.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for s in g.descents(Side::Right) {
            let h = g.mul_gen(s, Side::Right);
            for mut w in rec(&h) {
                w.push(s);
                out.push(w);
            }
        }
        out
    }
    rec(g)
        .into_iter()
        .map(|letters| CoxWord {
            letters,
            rank: g.rank(),
        })
        .collect()
}

/// Cayley-graph BFS distances from the identity; the ground-truth oracle for
/// the length function on small ranks.
pub fn bfs_lengths(n: usize) -> BTreeMap<SignedPermutation, usize> {
    let gens = generators(n);
    let mut dist = BTreeMap::new();
    let id = SignedPermutation::identity(n);
    dist.insert(id.clone(), 0usize);
    let mut queue = VecDeque::new();
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        for &s in &gens {
            let h = g.mul_gen(s, Side::Right);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}
