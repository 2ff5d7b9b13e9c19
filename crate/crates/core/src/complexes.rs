//! The chain complexes. Two families share one container type:
//!
//! - the complexes of injective words C(n) (unsigned) and Cpm(n) (signed),
//!   with set-level bases and boundary entries in {1, -1};
//! - the Hecke-module complexes D(n) (type A) and Dpm(n) (type B), whose
//!   degree-r term is the right module H ⊗_{H_J} 1 over a shrinking parabolic
//!   J, with basis the minimal left-coset representatives, plus the derived
//!   objects: the filtration levels F_p of Dpm(n), the quotients F_p/F_{p-1},
//!   their block decomposition, and the comparison complexes M(p,t) and the
//!   induced D^t used by the chain isomorphisms Phi and Psi.
//!
//! Degrees run from -1 (the empty word, or the full-group coset) upward, and
//! every boundary operator maps degree r to degree r-1.

use crate::coxeter::{
    self, is_j_reduced, CoxeterError, MVector, ParabolicSpec, Side, SignedPermutation,
};
use crate::hecke::{self, HeckeElement};
use crate::matrix::{MatrixError, SparseMatrix};
use crate::scalar::{Coef, FieldSpec, ScalarConfig};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
}

/// A word with pairwise distinct absolute letters, e.g. [3,-1] but not [1,-1].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InjWord(Vec<i32>);

impl InjWord {
    pub fn new(letters: Vec<i32>) -> Result<Self, ComplexError> {
        for (i, &a) in letters.iter().enumerate() {
            if a == 0 {
                return Err(ComplexError::BadParams(format!("zero letter in {letters:?}")));
            }
            if letters[..i].iter().any(|&b| b.abs() == a.abs()) {
                return Err(ComplexError::BadParams(format!(
                    "repeated absolute letter in {letters:?}"
                )));
            }
        }
        Ok(InjWord(letters))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with the (0-indexed) j-th letter removed.
    pub fn delete(&self, j: usize) -> InjWord {
        let mut v = self.0.clone();
        v.remove(j);
        InjWord(v)
    }
}

impl fmt::Display for InjWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", toks.join(","))
    }
}

/// A basis label: an injective word for C/Cpm, a group element for the
/// module complexes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Word(InjWord),
    Perm(SignedPermutation),
}

impl Label {
    pub fn as_perm(&self) -> Option<&SignedPermutation> {
        match self {
            Label::Perm(g) => Some(g),
            Label::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&InjWord> {
        match self {
            Label::Word(w) => Some(w),
            Label::Perm(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Word(w) => write!(f, "{w}"),
            Label::Perm(g) => write!(f, "{g}"),
        }
    }
}

/// Which Weyl group family a module complex lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylType {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexKind {
    /// Injective words, unsigned letters.
    C,
    /// Injective words, signed letters.
    Cpm,
    /// Coset-module complex over the symmetric group.
    D,
    /// Coset-module complex over the hyperoctahedral group.
    Dpm,
    /// Filtration level F_p of Dpm.
    Filtration { p: usize },
    /// Quotient F_p / F_{p-1}.
    Quotient { p: usize },
    /// One block of the quotient, indexed by a full sign profile.
    Block { p: usize, m: MVector },
    /// Comparison complex M(p,t); `leading` records whether the overall
    /// factor (-1)^p q^{-p} multiplies the boundary.
    MComparison { p: usize, t: usize, leading: bool },
    /// The complex induced from D^t along the parabolic inclusion.
    DtInduced { p: usize, t: usize },
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::C => write!(f, "C"),
            ComplexKind::Cpm => write!(f, "Cpm"),
            ComplexKind::D => write!(f, "D"),
            ComplexKind::Dpm => write!(f, "Dpm"),
            ComplexKind::Filtration { p } => write!(f, "F({p})"),
            ComplexKind::Quotient { p } => write!(f, "Q({p})"),
            ComplexKind::Block { p, m } => write!(f, "B({p},{m})"),
            ComplexKind::MComparison { p, t, .. } => write!(f, "M({p},{t})"),
            ComplexKind::DtInduced { p, t } => write!(f, "Dt({p},{t})"),
        }
    }
}

/// A chain complex with labelled bases. `basis[i]` is the basis in degree
/// `lo + i`; `boundary[i]` maps degree `lo + i + 1` to degree `lo + i`. For
/// complexes built from face maps, `faces[i][j]` is the j-th unsigned face in
/// the same position (empty when faces are not tracked, e.g. for blocks).
#[derive(Debug, Clone)]
pub struct LabeledComplex {
    pub kind: ComplexKind,
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
    pub field: FieldSpec,
    pub q: Option<Coef>,
    pub basis: Vec<Vec<Label>>,
    pub faces: Vec<Vec<SparseMatrix>>,
    pub boundary: Vec<SparseMatrix>,
}

impl LabeledComplex {
    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    fn deg_index(&self, deg: i64) -> Option<usize> {
        if deg < self.lo || deg > self.hi {
            None
        } else {
            Some((deg - self.lo) as usize)
        }
    }

    pub fn dim(&self, deg: i64) -> usize {
        self.deg_index(deg).map_or(0, |i| self.basis[i].len())
    }

    pub fn basis_at(&self, deg: i64) -> &[Label] {
        self.deg_index(deg).map_or(&[], |i| &self.basis[i])
    }

    /// The boundary map out of degree `deg` (into `deg - 1`), when stored.
    pub fn boundary_from(&self, deg: i64) -> Option<&SparseMatrix> {
        if deg <= self.lo {
            return None;
        }
        self.deg_index(deg).map(|i| &self.boundary[i - 1])
    }

    /// The unsigned faces out of degree `deg`, when tracked.
    pub fn faces_from(&self, deg: i64) -> Option<&[SparseMatrix]> {
        if deg <= self.lo || self.faces.is_empty() {
            return None;
        }
        self.deg_index(deg).map(|i| self.faces[i - 1].as_slice())
    }

    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(|b| b.len()).sum()
    }

    /// Verify that consecutive boundary maps compose to zero.
    pub fn check_dd_zero(&self) -> Result<(), ComplexError> {
        for deg in self.lo + 2..=self.hi {
            let d_hi = self.boundary_from(deg).unwrap();
            let d_lo = self.boundary_from(deg - 1).unwrap();
            let prod = d_lo.mul(d_hi)?;
            if !prod.is_zero() {
                return Err(ComplexError::Integrity(format!(
                    "boundary squared is nonzero from degree {deg} in {}",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    /// Deterministic JSON export: metadata, per-degree labels, and the
    /// boundary matrices as sparse triplets.
    pub fn to_json(&self) -> serde_json::Value {
        let mut basis = serde_json::Map::new();
        for deg in self.degrees() {
            let labels: Vec<String> = self.basis_at(deg).iter().map(|l| l.to_string()).collect();
            basis.insert(deg.to_string(), json!(labels));
        }
        let mut boundary = serde_json::Map::new();
        for deg in self.degrees().skip(1) {
            boundary.insert(deg.to_string(), self.boundary_from(deg).unwrap().to_json());
        }
        json!({
            "format_version": 1,
            "kind": self.kind.to_string(),
            "n": self.n,
            "field": self.field.to_string(),
            "q": self.q.as_ref().map(|q| q.to_string()),
            "lo": self.lo,
            "hi": self.hi,
            "dims": self.degrees().map(|d| self.dim(d)).collect::<Vec<_>>(),
            "basis": basis,
            "boundary": boundary,
        })
    }
}

fn inj_words(n: usize, len: usize, signed: bool) -> Vec<InjWord> {
    let mut out = Vec::new();
    let mut cur: Vec<i32> = Vec::with_capacity(len);
    fn rec(n: usize, len: usize, signed: bool, cur: &mut Vec<i32>, out: &mut Vec<InjWord>) {
        if cur.len() == len {
            out.push(InjWord(cur.clone()));
            return;
        }
        let lo = if signed { -(n as i32) } else { 1 };
        for a in lo..=(n as i32) {
            if a == 0 || cur.iter().any(|&b| b.abs() == a.abs()) {
                continue;
            }
            cur.push(a);
            rec(n, len, signed, cur, out);
            cur.pop();
        }
    }
    rec(n, len, signed, &mut cur, &mut out);
    out
}

/// The complex of injective words: C(n) for `signed = false`, Cpm(n)
/// otherwise. Degree r holds the words of length r+1; the boundary is the
/// alternating sum of letter deletions.
pub fn build_word_complex(
    n: usize,
    signed: bool,
    field: FieldSpec,
) -> Result<LabeledComplex, ComplexError> {
    let lo = -1i64;
    let hi = n as i64 - 1;
    let mut basis: Vec<Vec<InjWord>> = Vec::new();
    let mut index: Vec<BTreeMap<InjWord, usize>> = Vec::new();
    for r in lo..=hi {
        let words = inj_words(n, (r + 1) as usize, signed);
        let idx = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        basis.push(words);
        index.push(idx);
    }
    let mut faces = Vec::new();
    let mut boundary = Vec::new();
    for r in (lo + 1)..=hi {
        let di = (r - lo) as usize;
        let rows = basis[di - 1].len();
        let cols = basis[di].len();
        let mut face_mats = Vec::new();
        for j in 0..=(r as usize) {
            let mut trips = Vec::new();
            for (ci, w) in basis[di].iter().enumerate() {
                let target = w.delete(j);
                let ri = index[di - 1][&target];
                trips.push((ri, ci, Coef::one(field)));
            }
            face_mats.push(SparseMatrix::from_triplets(rows, cols, field, trips)?);
        }
        let parts: Vec<(Coef, &SparseMatrix)> = face_mats
            .iter()
            .enumerate()
            .map(|(j, m)| (Coef::from_i64(field, if j % 2 == 0 { 1 } else { -1 }), m))
            .collect();
        boundary.push(SparseMatrix::linear_combination(&parts)?);
        faces.push(face_mats);
    }
    Ok(LabeledComplex {
        kind: if signed { ComplexKind::Cpm } else { ComplexKind::C },
        n,
        lo,
        hi,
        field,
        q: None,
        basis: basis
            .into_iter()
            .map(|b| b.into_iter().map(Label::Word).collect())
            .collect(),
        faces,
        boundary,
    })
}

/// Shared construction for all the coset-module complexes: degree r carries
/// the module H ⊗_{H_{J(r)}} 1 with basis the minimal left-coset reps inside
/// `universe`, the j-th face right-multiplies by `multiplier(r, j)` and
/// projects, and the boundary is sum_j face_coeff(r, j) · face_j.
fn build_module_complex(
    kind: ComplexKind,
    n: usize,
    hi: i64,
    universe: &[SignedPermutation],
    cfg: &ScalarConfig,
    parabolic: impl Fn(i64) -> ParabolicSpec,
    multiplier: impl Fn(i64, i64) -> Result<HeckeElement, CoxeterError>,
    face_coeff: impl Fn(i64, i64) -> Coef,
) -> Result<LabeledComplex, ComplexError> {
    let lo = -1i64;
    if hi < lo {
        return Err(ComplexError::BadParams(format!(
            "empty degree range for {kind}"
        )));
    }
    let mut basis: Vec<Vec<SignedPermutation>> = Vec::new();
    let mut index: Vec<BTreeMap<SignedPermutation, usize>> = Vec::new();
    for r in lo..=hi {
        let j = parabolic(r);
        if !j.valid_for_rank(n) {
            return Err(ComplexError::BadParams(format!(
                "parabolic {:?} out of range at degree {r}",
                j.gens()
            )));
        }
        let b: Vec<SignedPermutation> = universe
            .iter()
            .filter(|g| is_j_reduced(g, &j, Side::Right))
            .cloned()
            .collect();
        let idx = b.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        basis.push(b);
        index.push(idx);
    }
    let mut faces = Vec::new();
    let mut boundary = Vec::new();
    for r in (lo + 1)..=hi {
        let di = (r - lo) as usize;
        let j_target = parabolic(r - 1);
        let rows = basis[di - 1].len();
        let cols = basis[di].len();
        let mut face_mats = Vec::new();
        for j in 0..=r {
            let mult = multiplier(r, j)?;
            let mut trips = Vec::new();
            for (ci, x) in basis[di].iter().enumerate() {
                let image = HeckeElement::t_of(x.clone(), cfg)
                    .mul(&mult)
                    .project_parabolic(&j_target);
                for (y, c) in image.terms() {
                    let ri = index[di - 1].get(y).ok_or_else(|| {
                        ComplexError::Integrity(format!(
                            "face image {y} is not a coset representative at degree {}",
                            r - 1
                        ))
                    })?;
                    trips.push((*ri, ci, c.clone()));
                }
            }
            face_mats.push(SparseMatrix::from_triplets(rows, cols, cfg.field(), trips)?);
        }
        let parts: Vec<(Coef, &SparseMatrix)> = face_mats
            .iter()
            .enumerate()
            .map(|(j, m)| (face_coeff(r, j as i64), m))
            .collect();
        boundary.push(SparseMatrix::linear_combination(&parts)?);
        faces.push(face_mats);
    }
    Ok(LabeledComplex {
        kind,
        n,
        lo,
        hi,
        field: cfg.field(),
        q: Some(cfg.q().clone()),
        basis: basis
            .into_iter()
            .map(|b| b.into_iter().map(Label::Perm).collect())
            .collect(),
        faces,
        boundary,
    })
}

/// The coset-module complex D(n) (type A) or Dpm(n) (type B). Degree r uses
/// the parabolic of corank r+1 (so B_{n-r-1} resp. the symmetric group on the
/// first n-r-1 points), the j-th face multiplies by T_{n-r+j, n-r}, and the
/// boundary weights face j by (-1)^j q^{-j}.
pub fn build_d_complex(
    n: usize,
    typ: WeylType,
    cfg: &ScalarConfig,
) -> Result<LabeledComplex, ComplexError> {
    if n == 0 {
        return Err(ComplexError::BadParams("n must be at least 1".into()));
    }
    let universe = match typ {
        WeylType::A => coxeter::symmetric_elements(n),
        WeylType::B => coxeter::all_elements(n),
    };
    let kind = match typ {
        WeylType::A => ComplexKind::D,
        WeylType::B => ComplexKind::Dpm,
    };
    let cfg2 = cfg.clone();
    build_module_complex(
        kind,
        n,
        n as i64 - 1,
        &universe,
        cfg,
        move |r| {
            let k = (n as i64 - r - 1) as usize;
            match typ {
                WeylType::A => ParabolicSpec::type_a(k, 0),
                WeylType::B => ParabolicSpec::type_b(k),
            }
        },
        move |r, j| {
            hecke::t_run(n, (n as i64 - r + j) as usize, (n as i64 - r) as usize, &cfg2)
        },
        |_, j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            cfg.q_pow(-j).mul(&cfg.from_i64(sign))
        },
    )
}

/// The comparison complex M(p,t) in degrees -1..=n-p-1: degree r is the
/// module over the shifted symmetric parabolic on n-r-p-1 points, the j-th
/// face multiplies by T_{n-r+j, n-p-r+t}, and the boundary weights face j by
/// (-1)^j q^{-j}, times a global (-1)^p q^{-p} when `leading` is set (the
/// normalization under which the quotient blocks match M(p,t) on the nose).
pub fn build_m_complex(
    n: usize,
    p: usize,
    t: usize,
    cfg: &ScalarConfig,
    leading: bool,
) -> Result<LabeledComplex, ComplexError> {
    if !(1 <= t && t <= p && p <= n) {
        return Err(ComplexError::BadParams(format!(
            "M(p,t) wants 1 <= t <= p <= n, got p={p} t={t} n={n}"
        )));
    }
    let universe = coxeter::symmetric_elements(n);
    let cfg2 = cfg.clone();
    let lead = if leading {
        cfg.q_pow(-(p as i64))
            .mul(&cfg.from_i64(if p % 2 == 0 { 1 } else { -1 }))
    } else {
        cfg.one()
    };
    build_module_complex(
        ComplexKind::MComparison { p, t, leading },
        n,
        n as i64 - p as i64 - 1,
        &universe,
        cfg,
        move |r| ParabolicSpec::type_a((n as i64 - r - p as i64 - 1) as usize, t),
        move |r, j| {
            hecke::t_run(
                n,
                (n as i64 - r + j) as usize,
                (n as i64 - p as i64 - r + t as i64) as usize,
                &cfg2,
            )
        },
        move |_, j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            lead.mul(&cfg.q_pow(-j)).mul(&cfg.from_i64(sign))
        },
    )
}

/// The complex induced from D^t(n-p) up to the big algebra: the degree-r term
/// agrees with M(p,t) (same parabolic, same basis), but the j-th face
/// multiplies by T_{n-p-r+j+t, n-p-r+t} and the boundary has no leading
/// factor. Psi maps M(p,t) isomorphically onto this complex.
pub fn build_dt_induced(
    n: usize,
    p: usize,
    t: usize,
    cfg: &ScalarConfig,
) -> Result<LabeledComplex, ComplexError> {
    if !(1 <= t && t <= p && p <= n) {
        return Err(ComplexError::BadParams(format!(
            "Dt(p,t) wants 1 <= t <= p <= n, got p={p} t={t} n={n}"
        )));
    }
    let universe = coxeter::symmetric_elements(n);
    let cfg2 = cfg.clone();
    build_module_complex(
        ComplexKind::DtInduced { p, t },
        n,
        n as i64 - p as i64 - 1,
        &universe,
        cfg,
        move |r| ParabolicSpec::type_a((n as i64 - r - p as i64 - 1) as usize, t),
        move |r, j| {
            hecke::t_run(
                n,
                (n as i64 - p as i64 - r + j + t as i64) as usize,
                (n as i64 - p as i64 - r + t as i64) as usize,
                &cfg2,
            )
        },
        |_, j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            cfg.q_pow(-j).mul(&cfg.from_i64(sign))
        },
    )
}

/// The filtration value of a degree-r basis element of Dpm(n): the largest
/// position (1-based from the left end of the length r+1 window) carrying a
/// negative letter, or 0 if none.
pub fn filtration_value(g: &SignedPermutation, r: i64) -> usize {
    coxeter::negative_profile(g, r).m1()
}

fn perm_labels(c: &LabeledComplex, deg: i64) -> Result<Vec<&SignedPermutation>, ComplexError> {
    c.basis_at(deg)
        .iter()
        .map(|l| {
            l.as_perm().ok_or_else(|| {
                ComplexError::BadParams("expected a module complex with group labels".into())
            })
        })
        .collect()
}

fn restrict_matrix(
    m: &SparseMatrix,
    keep_rows: &[usize],
    keep_cols: &[usize],
    dropped_row_ok: impl Fn(usize) -> bool,
    what: &str,
) -> Result<SparseMatrix, ComplexError> {
    let mut row_map: Vec<Option<usize>> = vec![None; m.rows()];
    for (new, &old) in keep_rows.iter().enumerate() {
        row_map[old] = Some(new);
    }
    let mut col_map: Vec<Option<usize>> = vec![None; m.cols()];
    for (new, &old) in keep_cols.iter().enumerate() {
        col_map[old] = Some(new);
    }
    let mut trips = Vec::new();
    for (r, c, v) in m.entries() {
        let Some(nc) = col_map[*c as usize] else { continue };
        match row_map[*r as usize] {
            Some(nr) => trips.push((nr, nc, v.clone())),
            None => {
                if !dropped_row_ok(*r as usize) {
                    return Err(ComplexError::Integrity(format!(
                        "{what}: kept column {c} hits dropped row {r}"
                    )));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(
        keep_rows.len(),
        keep_cols.len(),
        m.field(),
        trips,
    )?)
}

fn restricted_complex(
    src: &LabeledComplex,
    kind: ComplexKind,
    keep: &[Vec<usize>],
    dropped_row_ok: impl Fn(i64, usize) -> bool,
    restrict_faces: bool,
) -> Result<LabeledComplex, ComplexError> {
    let mut basis = Vec::new();
    for (i, k) in keep.iter().enumerate() {
        let deg_basis = &src.basis[i];
        basis.push(k.iter().map(|&idx| deg_basis[idx].clone()).collect::<Vec<_>>());
    }
    let mut boundary = Vec::new();
    let mut faces = Vec::new();
    for deg in (src.lo + 1)..=src.hi {
        let di = (deg - src.lo) as usize;
        let what = format!("{kind} from {}", src.kind);
        boundary.push(restrict_matrix(
            src.boundary_from(deg).unwrap(),
            &keep[di - 1],
            &keep[di],
            |row| dropped_row_ok(deg - 1, row),
            &what,
        )?);
        if restrict_faces {
            let src_faces = src.faces_from(deg).ok_or_else(|| {
                ComplexError::BadParams(format!("{} has no tracked faces", src.kind))
            })?;
            let mut fs = Vec::new();
            for f in src_faces {
                fs.push(restrict_matrix(
                    f,
                    &keep[di - 1],
                    &keep[di],
                    |row| dropped_row_ok(deg - 1, row),
                    &what,
                )?);
            }
            faces.push(fs);
        }
    }
    Ok(LabeledComplex {
        kind,
        n: src.n,
        lo: src.lo,
        hi: src.hi,
        field: src.field,
        q: src.q.clone(),
        basis,
        faces,
        boundary,
    })
}

/// The filtration level F_p of Dpm(n): the span of the basis elements with
/// filtration value at most p. The construction fails with an integrity error
/// if any face of a kept element were to leave the level (it never does).
pub fn filtration_subcomplex(
    dpm: &LabeledComplex,
    p: usize,
) -> Result<LabeledComplex, ComplexError> {
    if dpm.kind != ComplexKind::Dpm {
        return Err(ComplexError::BadParams(format!(
            "filtration is defined on Dpm, not {}",
            dpm.kind
        )));
    }
    let mut keep = Vec::new();
    for deg in dpm.degrees() {
        let labels = perm_labels(dpm, deg)?;
        keep.push(
            (0..labels.len())
                .filter(|&i| filtration_value(labels[i], deg) <= p)
                .collect::<Vec<_>>(),
        );
    }
    restricted_complex(dpm, ComplexKind::Filtration { p }, &keep, |_, _| false, true)
}

/// The quotient F_p / F_{p-1}, presented on the basis elements of filtration
/// value exactly p. Faces into lower filtration are dropped; an entry into a
/// dropped row with filtration value >= p would be an integrity violation.
pub fn quotient_complex(dpm: &LabeledComplex, p: usize) -> Result<LabeledComplex, ComplexError> {
    if dpm.kind != ComplexKind::Dpm {
        return Err(ComplexError::BadParams(format!(
            "quotients are taken in Dpm, not {}",
            dpm.kind
        )));
    }
    if p < 1 {
        return Err(ComplexError::BadParams("quotient wants p >= 1".into()));
    }
    let mut keep = Vec::new();
    let mut values: Vec<Vec<usize>> = Vec::new();
    for deg in dpm.degrees() {
        let labels = perm_labels(dpm, deg)?;
        let vals: Vec<usize> = labels
            .iter()
            .map(|&g| filtration_value(g, deg))
            .collect();
        keep.push(
            (0..labels.len())
                .filter(|&i| vals[i] == p)
                .collect::<Vec<_>>(),
        );
        values.push(vals);
    }
    restricted_complex(
        dpm,
        ComplexKind::Quotient { p },
        &keep,
        |deg, row| values[(deg - dpm.lo) as usize][row] < p,
        true,
    )
}

/// Split a quotient F_p / F_{p-1} into its blocks, one per full sign profile
/// m with leading entry p, in lexicographic profile order. The boundary is
/// checked to be block-diagonal along the way. Faces are not tracked on the
/// blocks.
pub fn block_decompose(
    quotient: &LabeledComplex,
) -> Result<Vec<(MVector, LabeledComplex)>, ComplexError> {
    let p = match &quotient.kind {
        ComplexKind::Quotient { p } => *p,
        k => {
            return Err(ComplexError::BadParams(format!(
                "block decomposition applies to quotients, not {k}"
            )))
        }
    };
    // all strictly decreasing profiles with leading entry p
    let mut profiles: Vec<MVector> = Vec::new();
    for mask in 0..(1u32 << (p - 1)) {
        let mut entries = vec![p];
        for e in (1..p).rev() {
            if mask >> (e - 1) & 1 == 1 {
                entries.push(e);
            }
        }
        profiles.push(MVector::new(entries).expect("profiles are strictly decreasing"));
    }
    profiles.sort();
    let mut per_degree_profiles: Vec<Vec<MVector>> = Vec::new();
    for deg in quotient.degrees() {
        let labels = perm_labels(quotient, deg)?;
        per_degree_profiles.push(
            labels
                .iter()
                .map(|&g| coxeter::negative_profile(g, deg))
                .collect(),
        );
    }
    let mut out = Vec::new();
    for m in profiles {
        let mut keep = Vec::new();
        for profs in &per_degree_profiles {
            keep.push(
                (0..profs.len())
                    .filter(|&i| profs[i] == m)
                    .collect::<Vec<_>>(),
            );
        }
        let block = restricted_complex(
            quotient,
            ComplexKind::Block { p, m: m.clone() },
            &keep,
            |_, _| false,
            false,
        )?;
        out.push((m, block));
    }
    Ok(out)
}

/// The label-level map Phi from M(p,t) in degree r to the block of profile m
/// (with |m| = t) in degree p+r: x goes to x · v(m + (n-1-p-r)). Returns the
/// permutation matrix of the bijection, with rows indexed by the block basis.
pub fn phi_matrix(
    mt: &LabeledComplex,
    block: &LabeledComplex,
    m: &MVector,
    r: i64,
) -> Result<SparseMatrix, ComplexError> {
    let n = mt.n;
    let p = block_p(block)?;
    let shift = (n as i64 - 1 - p as i64 - r) as usize;
    let v = coxeter::v_of(n, &m.shift(shift))?;
    let source = perm_labels(mt, r)?;
    let target = perm_labels(block, r + p as i64)?;
    let target_index: BTreeMap<&SignedPermutation, usize> =
        target.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut trips = Vec::new();
    for (ci, x) in source.iter().enumerate() {
        let image = x.compose(&v);
        let ri = target_index.get(&image).ok_or_else(|| {
            ComplexError::Integrity(format!(
                "Phi image {image} missing from block {} at degree {}",
                block.kind,
                r + p as i64
            ))
        })?;
        trips.push((*ri, ci, Coef::one(mt.field)));
    }
    if source.len() != target.len() {
        return Err(ComplexError::Integrity(format!(
            "Phi dimensions disagree at degree {r}: {} vs {}",
            source.len(),
            target.len()
        )));
    }
    Ok(SparseMatrix::from_triplets(
        target.len(),
        source.len(),
        mt.field,
        trips,
    )?)
}

fn block_p(block: &LabeledComplex) -> Result<usize, ComplexError> {
    match &block.kind {
        ComplexKind::Block { p, .. } => Ok(*p),
        k => Err(ComplexError::BadParams(format!(
            "expected a block, found {k}"
        ))),
    }
}

/// The matrix of the module map x -> project(T_x · h) between two complexes
/// sharing bases and parabolics in each degree (M(p,t) and the induced D^t),
/// in a fixed degree r. Used for Psi (h = xi(r)) and its inverse.
pub fn transport_matrix(
    src: &LabeledComplex,
    dst: &LabeledComplex,
    r: i64,
    h: &HeckeElement,
    cfg: &ScalarConfig,
    parabolic: &ParabolicSpec,
) -> Result<SparseMatrix, ComplexError> {
    let source = perm_labels(src, r)?;
    let target = perm_labels(dst, r)?;
    let target_index: BTreeMap<&SignedPermutation, usize> =
        target.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut trips = Vec::new();
    for (ci, x) in source.iter().enumerate() {
        let image = HeckeElement::t_of((*x).clone(), cfg)
            .mul(h)
            .project_parabolic(parabolic);
        for (y, c) in image.terms() {
            let ri = target_index.get(y).ok_or_else(|| {
                ComplexError::Integrity(format!(
                    "transport image {y} is not a representative at degree {r}"
                ))
            })?;
            trips.push((*ri, ci, c.clone()));
        }
    }
    Ok(SparseMatrix::from_triplets(
        target.len(),
        source.len(),
        cfg.field(),
        trips,
    )?)
}
