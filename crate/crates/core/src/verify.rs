//! Runnable verification suites. The identity suites replay the rewriting
//! identities that drive the filtration argument (reduced-word independence,
//! the conjugation shift, run rewriting, the sharp commutation bound, the
//! ladder identity) over every valid index tuple up to a rank bound. The
//! structure suite takes one Dpm(n) apart: filtration levels, quotients,
//! sign-profile blocks, the Phi relabeling and the Psi transport, and the
//! Betti-number bookkeeping that ties the quotients to the comparison
//! complexes. Both report per-suite case and failure counts instead of
//! panicking, so the CLI can surface them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complexes::{
    block_decompose, build_d_complex, build_dt_induced, build_m_complex, build_word_complex,
    filtration_subcomplex, filtration_value, phi_matrix, quotient_complex, transport_matrix,
    ComplexError, InjWord, Label, LabeledComplex, WeylType,
};
use crate::coxeter::{
    all_elements, all_reduced_words, double_coset_reps, u_m_elem, CoxWord, GeneratorSymbol,
    MVector, ParabolicSpec, Side, SignedPermutation,
};
use crate::hecke::{self, HeckeElement};
use crate::homology::homology_report;
use crate::matrix::SparseMatrix;
use crate::scalar::{Coef, FieldSpec, ScalarConfig};

/// How many failure descriptions a suite keeps; the count keeps going.
const MAX_RECORDED: usize = 12;

/// Outcome of one named suite: how many cases ran, how many failed, and a
/// description of the first few failures.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            cases: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(msg());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn fold_word(n: usize, letters: &[GeneratorSymbol], cfg: &ScalarConfig) -> HeckeElement {
    let mut acc = HeckeElement::one(n, cfg);
    for &l in letters {
        acc = acc.mul_gen(l, Side::Right);
    }
    acc
}

fn last_descent_word(g: &SignedPermutation) -> CoxWord {
    let mut letters = Vec::new();
    let mut h = g.clone();
    while let Some(&s) = h.descents(Side::Right).last() {
        h = h.mul_gen(s, Side::Right);
        letters.push(s);
    }
    letters.reverse();
    CoxWord::new(letters, g.rank()).expect("letters came from descents")
}

/// Run the five identity suites for ranks up to `n_max`. With `perturb_xi`
/// set, the first letter of every nonempty xi word is bumped to a neighbour
/// index before the ladder identity is evaluated; the suite then fails, which
/// is the negative control showing the checks are not vacuous.
pub fn identity_suite(n_max: usize, cfg: &ScalarConfig, perturb_xi: bool) -> Vec<SuiteResult> {
    vec![
        reduced_word_independence(n_max, cfg),
        conjugation_shift(n_max, cfg),
        u_run_rewriting(n_max, cfg),
        v_run_commutation(n_max, cfg),
        xi_ladder(n_max, cfg, perturb_xi),
    ]
}

/// Evaluating T along any reduced word of g gives the same Hecke element.
/// Exhaustive over all reduced words through rank 3; for higher ranks every
/// element is evaluated along its first-descent and last-descent words.
fn reduced_word_independence(n_max: usize, cfg: &ScalarConfig) -> SuiteResult {
    let mut s = SuiteResult::new("reduced-word-independence");
    for n in 1..=n_max {
        for g in all_elements(n) {
            let expect = HeckeElement::t_of(g.clone(), cfg);
            let words: Vec<CoxWord> = if n <= 3 {
                all_reduced_words(&g)
            } else {
                vec![g.reduced_word(), last_descent_word(&g)]
            };
            for w in words {
                let acc = fold_word(n, &w.letters, cfg);
                s.check(acc == expect, || format!("B_{n}: {g} evaluated along {w}"));
            }
        }
    }
    s
}

/// u_n shifts the symmetric generators down by one under conjugation, at the
/// group level and at the Hecke level (both sides of T_{s_i} U_n = U_n
/// T_{s_{i-1}} are length-additive). Also re-derives the double coset
/// enumeration S_n \ B_n / B_{n-1} = {1, u_n} by brute force.
fn conjugation_shift(n_max: usize, cfg: &ScalarConfig) -> SuiteResult {
    let mut s = SuiteResult::new("conjugation-shift");
    for n in 2..=n_max {
        let un = u_m_elem(n, n).expect("u_n exists");
        let tu = HeckeElement::t_of(un.clone(), cfg);
        for i in 2..n {
            let si = SignedPermutation::identity(n).mul_gen(GeneratorSymbol::S(i), Side::Right);
            let conj = un.inverse().compose(&si).compose(&un);
            let shifted =
                SignedPermutation::identity(n).mul_gen(GeneratorSymbol::S(i - 1), Side::Right);
            s.check(conj == shifted, || {
                format!("u_{n}^-1 s_{i} u_{n} is {conj}, not s_{}", i - 1)
            });
            let lhs = hecke::t_gen(n, GeneratorSymbol::S(i), cfg).mul(&tu);
            let rhs = tu.mul(&hecke::t_gen(n, GeneratorSymbol::S(i - 1), cfg));
            s.check(lhs == rhs, || {
                format!("T_s{i} U_{n} and U_{n} T_s{} differ", i - 1)
            });
        }
        let reps = double_coset_reps(n, &ParabolicSpec::type_a(n, 0), &ParabolicSpec::type_b(n - 1));
        s.check(reps == vec![SignedPermutation::identity(n), un.clone()], || {
            format!("double coset reps of S_{n} \\ B_{n} / B_{} are not 1, u_{n}", n - 1)
        });
    }
    s
}

/// The three rewriting cases for U_m against a run T_{a,b}: commute past a
/// shorter run (m > a > b), absorb into a longer one (a > m >= b), and the
/// trivial run a = b.
fn u_run_rewriting(n_max: usize, cfg: &ScalarConfig) -> SuiteResult {
    let mut s = SuiteResult::new("u-run-rewriting");
    for n in 2..=n_max {
        for m in 1..=n {
            for a in 1..=n {
                for b in 1..=a {
                    let lhs = hecke::u_run(n, m, cfg)
                        .expect("m in range")
                        .mul(&hecke::t_run(n, a, b, cfg).expect("a >= b >= 1"));
                    if m > a && a > b {
                        let rhs = hecke::t_run(n, a + 1, b + 1, cfg)
                            .expect("shifted run in range")
                            .mul(&hecke::u_run(n, m, cfg).expect("m in range"));
                        s.check(lhs == rhs, || {
                            format!("case m>a>b at (n,m,a,b)=({n},{m},{a},{b})")
                        });
                    } else if a > m && m >= b {
                        let rhs = hecke::t_run(n, a, b + 1, cfg)
                            .expect("shortened run in range")
                            .mul(&hecke::u_run(n, m + 1, cfg).expect("m+1 <= a <= n"));
                        s.check(lhs == rhs, || {
                            format!("case a>m>=b at (n,m,a,b)=({n},{m},{a},{b})")
                        });
                    } else if a == b {
                        s.check(lhs == hecke::u_run(n, m, cfg).expect("m in range"), || {
                            format!("trivial run at (n,m,a)=({n},{m},{a})")
                        });
                    }
                }
            }
        }
    }
    s
}

/// T_k V(m) = V(m) T_{k-t} holds exactly when t < k <= m_t + t - 2, for every
/// profile m inside B_n and every generator index k. Both directions of the
/// equivalence are checked.
fn v_run_commutation(n_max: usize, cfg: &ScalarConfig) -> SuiteResult {
    let mut s = SuiteResult::new("v-run-commutation");
    for n in 2..=n_max {
        for mask in 1u32..(1 << n) {
            let mut entries: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            entries.sort_unstable_by(|x, y| y.cmp(x));
            let m = MVector::new(entries.clone()).expect("strictly decreasing");
            let t = m.t();
            let mt = *entries.last().expect("mask is nonzero");
            let v = hecke::v_run(n, &m, cfg).expect("entries bounded by n");
            for k in 1..n {
                let expected = t < k && k <= mt + t - 2;
                if k <= t {
                    // T_{k-t} does not parse; the identity cannot hold
                    s.check(!expected, || format!("bound misfires at n={n} m={m} k={k}"));
                    continue;
                }
                let lhs = hecke::t_gen(n, GeneratorSymbol::S(k), cfg).mul(&v);
                let rhs = v.mul(&hecke::t_gen(n, GeneratorSymbol::S(k - t), cfg));
                s.check((lhs == rhs) == expected, || {
                    format!("sharp commutation bound at n={n} m={m} k={k}")
                });
            }
        }
    }
    s
}

fn xi_letters(n: usize, p: usize, t: usize, r: i64, perturb: bool) -> Vec<GeneratorSymbol> {
    let mut letters = hecke::xi_word(n, p, t, r).expect("indices in range").letters;
    if perturb {
        if let Some(GeneratorSymbol::S(i)) = letters.first().copied() {
            letters[0] = GeneratorSymbol::S(if i + 1 < n { i + 1 } else { i - 1 });
        }
    }
    letters
}

/// The ladder identity: a run entering xi(r-1) from the left comes out of
/// xi(r) as the corresponding lowered run. Words are evaluated by folding so
/// that the perturbed variant stays well defined.
fn xi_ladder(n_max: usize, cfg: &ScalarConfig, perturb: bool) -> SuiteResult {
    let mut s = SuiteResult::new("xi-ladder");
    for n in 2..=n_max {
        for p in 1..n {
            for t in 1..=p {
                for r in 0..=(n - p - 1) as i64 {
                    let b = (n as i64 - p as i64 - r + t as i64) as usize;
                    let prev = fold_word(n, &xi_letters(n, p, t, r - 1, perturb), cfg);
                    let cur = fold_word(n, &xi_letters(n, p, t, r, perturb), cfg);
                    for j in 0..=r {
                        let a_left = (n as i64 - r + j) as usize;
                        let a_right = (n as i64 - p as i64 - r + j + t as i64) as usize;
                        let lhs = hecke::t_run(n, a_left, b, cfg)
                            .expect("run in range")
                            .mul(&prev);
                        let rhs = cur.mul(&hecke::t_run(n, a_right, b, cfg).expect("run in range"));
                        s.check(lhs == rhs, || {
                            format!("ladder at n={n} p={p} t={t} r={r} j={j}")
                        });
                    }
                }
            }
        }
    }
    s
}

fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

fn factorial(k: usize) -> usize {
    (1..=k).product::<usize>().max(1)
}

fn label_set(c: &LabeledComplex, deg: i64) -> BTreeSet<String> {
    c.basis_at(deg).iter().map(|l| l.to_string()).collect()
}

/// Take one Dpm(n) apart and check every structural claim about it: the
/// filtration, the associated graded quotients, their block decomposition,
/// the Phi and Psi comparisons, and the resulting Betti-number bookkeeping.
pub fn structure_suite(n: usize, cfg: &ScalarConfig) -> Result<Vec<SuiteResult>, ComplexError> {
    let dpm = build_d_complex(n, WeylType::B, cfg)?;
    Ok(vec![
        filtration_checks(n, cfg, &dpm),
        quotient_checks(n, &dpm),
        block_checks(n, &dpm),
        betti_decomposition_checks(n, cfg, &dpm),
        phi_checks(n, cfg, &dpm),
        psi_checks(n, cfg),
    ])
}

/// F_0 through F_n exist, are nested, close under the boundary entrywise,
/// start at the type A complex and end at the whole of Dpm.
fn filtration_checks(n: usize, cfg: &ScalarConfig, dpm: &LabeledComplex) -> SuiteResult {
    let mut s = SuiteResult::new("filtration");
    // entrywise closure: a face can only lower the filtration value
    for deg in dpm.degrees().skip(1) {
        let col_vals: Vec<usize> = dpm
            .basis_at(deg)
            .iter()
            .map(|l| filtration_value(l.as_perm().expect("module labels"), deg))
            .collect();
        let row_vals: Vec<usize> = dpm
            .basis_at(deg - 1)
            .iter()
            .map(|l| filtration_value(l.as_perm().expect("module labels"), deg - 1))
            .collect();
        let d = dpm.boundary_from(deg).expect("interior degree");
        s.check(
            d.entries()
                .iter()
                .all(|(r, c, _)| row_vals[*r as usize] <= col_vals[*c as usize]),
            || format!("a boundary entry raises the filtration value in degree {deg}"),
        );
    }
    let mut prev: Option<LabeledComplex> = None;
    for p in 0..=n {
        let f = match filtration_subcomplex(dpm, p) {
            Ok(f) => f,
            Err(e) => {
                s.check(false, || format!("F_{p} failed to build: {e}"));
                prev = None;
                continue;
            }
        };
        if let Some(g) = &prev {
            for deg in f.degrees() {
                s.check(
                    label_set(g, deg).is_subset(&label_set(&f, deg)),
                    || format!("F_{} is not contained in F_{p} in degree {deg}", p - 1),
                );
            }
        }
        if p == 0 {
            match build_d_complex(n, WeylType::A, cfg) {
                Ok(da) => {
                    for deg in f.degrees() {
                        s.check(label_set(&da, deg) == label_set(&f, deg), || {
                            format!("F_0 and D({n}) disagree on the degree {deg} basis")
                        });
                    }
                    for deg in f.degrees().skip(1) {
                        s.check(f.boundary_from(deg) == da.boundary_from(deg), || {
                            format!("F_0 and D({n}) boundaries differ from degree {deg}")
                        });
                    }
                }
                Err(e) => s.check(false, || format!("D({n}) failed to build: {e}")),
            }
        }
        if p == n {
            for deg in f.degrees() {
                s.check(f.dim(deg) == dpm.dim(deg), || {
                    format!("F_{n} is smaller than Dpm({n}) in degree {deg}")
                });
            }
            for deg in f.degrees().skip(1) {
                s.check(f.boundary_from(deg) == dpm.boundary_from(deg), || {
                    format!("F_{n} and Dpm({n}) boundaries differ from degree {deg}")
                });
            }
        }
        prev = Some(f);
    }
    s
}

/// The quotients F_p / F_{p-1} are free on the value-p basis elements, with
/// the predicted dimensions, vanishing faces below index p, and a square-zero
/// boundary.
fn quotient_checks(n: usize, dpm: &LabeledComplex) -> SuiteResult {
    let mut s = SuiteResult::new("quotients");
    for p in 1..=n {
        let q = match quotient_complex(dpm, p) {
            Ok(q) => q,
            Err(e) => {
                s.check(false, || format!("F_{p}/F_{} failed to build: {e}", p - 1));
                continue;
            }
        };
        s.check(q.check_dd_zero().is_ok(), || {
            format!("F_{p}/F_{} does not square to zero", p - 1)
        });
        for deg in q.degrees() {
            let l = (deg + 1) as usize;
            let want = if l >= p {
                (1usize << (p - 1)) * factorial(n) / factorial(n - l)
            } else {
                0
            };
            s.check(q.dim(deg) == want, || {
                format!(
                    "F_{p}/F_{} has dimension {} in degree {deg}, wanted {want}",
                    p - 1,
                    q.dim(deg)
                )
            });
        }
        for deg in q.degrees().skip(1) {
            if let Some(faces) = q.faces_from(deg) {
                for (j, f) in faces.iter().enumerate().take(p.min(faces.len())) {
                    s.check(f.is_zero(), || {
                        format!("face {j} of F_{p}/F_{} survives in degree {deg}", p - 1)
                    });
                }
            }
        }
    }
    s
}

/// Each quotient splits into 2^(p-1) blocks indexed by the full sign
/// profiles, binomially many per profile length, and the block dimensions
/// partition the quotient dimension.
fn block_checks(n: usize, dpm: &LabeledComplex) -> SuiteResult {
    let mut s = SuiteResult::new("blocks");
    for p in 1..=n {
        let q = match quotient_complex(dpm, p) {
            Ok(q) => q,
            Err(e) => {
                s.check(false, || format!("F_{p}/F_{} failed to build: {e}", p - 1));
                continue;
            }
        };
        let blocks = match block_decompose(&q) {
            Ok(b) => b,
            Err(e) => {
                s.check(false, || format!("block decomposition failed at p={p}: {e}"));
                continue;
            }
        };
        s.check(blocks.len() == 1 << (p - 1), || {
            format!("{} blocks at p={p}, wanted {}", blocks.len(), 1 << (p - 1))
        });
        for t in 1..=p {
            let count = blocks.iter().filter(|(m, _)| m.t() == t).count();
            s.check(count == binomial(p - 1, t - 1), || {
                format!("{count} blocks with t={t} at p={p}")
            });
        }
        for (m, block) in &blocks {
            s.check(m.m1() == p, || format!("block profile {m} does not lead with {p}"));
            s.check(block.check_dd_zero().is_ok(), || {
                format!("block {m} does not square to zero at p={p}")
            });
        }
        for deg in q.degrees() {
            let total: usize = blocks.iter().map(|(_, b)| b.dim(deg)).sum();
            s.check(total == q.dim(deg), || {
                format!("block dimensions do not partition degree {deg} at p={p}")
            });
        }
    }
    s
}

/// The Betti numbers of F_p / F_{p-1} decompose binomially over the
/// comparison complexes: b_r = sum_t C(p-1, t-1) b_{r-p}(M(p,t)).
fn betti_decomposition_checks(n: usize, cfg: &ScalarConfig, dpm: &LabeledComplex) -> SuiteResult {
    let mut s = SuiteResult::new("betti-decomposition");
    for p in 1..=n {
        let qrep = match quotient_complex(dpm, p).and_then(|q| homology_report(&q)) {
            Ok(r) => r,
            Err(e) => {
                s.check(false, || format!("quotient homology failed at p={p}: {e}"));
                continue;
            }
        };
        let mut mreps = Vec::new();
        let mut ok = true;
        for t in 1..=p {
            match build_m_complex(n, p, t, cfg, true).and_then(|m| homology_report(&m)) {
                Ok(r) => mreps.push(r),
                Err(e) => {
                    s.check(false, || format!("M({p},{t}) homology failed: {e}"));
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        for r in dpm.degrees() {
            let want: usize = (1..=p)
                .map(|t| binomial(p - 1, t - 1) * mreps[t - 1].betti_at(r - p as i64))
                .sum();
            s.check(qrep.betti_at(r) == want, || {
                format!(
                    "degree {r} of F_{p}/F_{} has Betti number {}, decomposition gives {want}",
                    p - 1,
                    qrep.betti_at(r)
                )
            });
        }
    }
    s
}

/// Phi relabels M(p,t) onto the block of each profile m with |m| = t, degree
/// by degree, and the relabeling commutes with the boundaries.
fn phi_checks(n: usize, cfg: &ScalarConfig, dpm: &LabeledComplex) -> SuiteResult {
    let mut s = SuiteResult::new("phi");
    for p in 1..=n {
        let blocks = match quotient_complex(dpm, p).and_then(|q| block_decompose(&q)) {
            Ok(b) => b,
            Err(e) => {
                s.check(false, || format!("blocks failed at p={p}: {e}"));
                continue;
            }
        };
        for (m, block) in &blocks {
            let mt = match build_m_complex(n, p, m.t(), cfg, true) {
                Ok(c) => c,
                Err(e) => {
                    s.check(false, || format!("M({p},{}) failed: {e}", m.t()));
                    continue;
                }
            };
            let mut prev: Option<SparseMatrix> = None;
            for r in mt.degrees() {
                // phi_matrix validates the bijection itself, so its success
                // is a case in its own right
                let attempt = phi_matrix(&mt, block, m, r);
                s.check(attempt.is_ok(), || {
                    format!(
                        "Phi failed at {m}, degree {r}: {}",
                        attempt.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
                    )
                });
                let phi = match attempt {
                    Ok(f) => f,
                    Err(_) => {
                        prev = None;
                        continue;
                    }
                };
                if let (Some(phi_prev), Some(dm), Some(db)) = (
                    &prev,
                    mt.boundary_from(r),
                    block.boundary_from(r + p as i64),
                ) {
                    let lhs = db.mul(&phi).expect("shapes match");
                    let rhs = phi_prev.mul(dm).expect("shapes match");
                    s.check(lhs == rhs, || {
                        format!("Phi square fails at profile {m}, degree {r}")
                    });
                }
                prev = Some(phi);
            }
        }
    }
    s
}

/// Psi transports M(p,t) onto the induced complex by right multiplication
/// with xi(r): invertible in each degree, and a chain map.
fn psi_checks(n: usize, cfg: &ScalarConfig) -> SuiteResult {
    let mut s = SuiteResult::new("psi");
    for p in 1..=n {
        for t in 1..=p {
            let built = build_m_complex(n, p, t, cfg, false)
                .and_then(|mt| Ok((mt, build_dt_induced(n, p, t, cfg)?)));
            let (mt, dt) = match built {
                Ok(pair) => pair,
                Err(e) => {
                    s.check(false, || format!("M/Dt({p},{t}) failed to build: {e}"));
                    continue;
                }
            };
            let mut prev: Option<SparseMatrix> = None;
            for r in mt.degrees() {
                let parabolic =
                    ParabolicSpec::type_a((n as i64 - r - p as i64 - 1) as usize, t);
                let xi = hecke::xi_elem(n, p, t, r, cfg).expect("indices in range");
                let xinv = hecke::xi_inverse_elem(n, p, t, r, cfg).expect("indices in range");
                let fwd = match transport_matrix(&mt, &dt, r, &xi, cfg, &parabolic) {
                    Ok(f) => f,
                    Err(e) => {
                        s.check(false, || format!("Psi failed at ({p},{t}), degree {r}: {e}"));
                        prev = None;
                        continue;
                    }
                };
                let bwd = match transport_matrix(&dt, &mt, r, &xinv, cfg, &parabolic) {
                    Ok(b) => b,
                    Err(e) => {
                        s.check(false, || {
                            format!("Psi inverse failed at ({p},{t}), degree {r}: {e}")
                        });
                        prev = None;
                        continue;
                    }
                };
                let id = SparseMatrix::identity(mt.dim(r), cfg.field());
                s.check(bwd.mul(&fwd).expect("shapes match") == id, || {
                    format!("Psi is not invertible at ({p},{t}), degree {r}")
                });
                if let (Some(psi_prev), Some(dm), Some(dd)) =
                    (&prev, mt.boundary_from(r), dt.boundary_from(r))
                {
                    let lhs = psi_prev.mul(dm).expect("shapes match");
                    let rhs = dd.mul(&fwd).expect("shapes match");
                    s.check(lhs == rhs, || {
                        format!("Psi square fails at ({p},{t}), degree {r}")
                    });
                }
                prev = Some(fwd);
            }
        }
    }
    s
}

/// At q = 1 the module complex is the word complex in disguise: the basis
/// element x corresponds to the window word (x(n-r), ..., x(n)), and the
/// relabeling intertwines the boundaries.
pub fn q1_suite(n: usize, typ: WeylType) -> Result<SuiteResult, ComplexError> {
    let cfg = ScalarConfig::rational("1").expect("q = 1 parses");
    let signed = matches!(typ, WeylType::B);
    let mut s = SuiteResult::new(match typ {
        WeylType::A => "q1-window-A",
        WeylType::B => "q1-window-B",
    });
    let d = build_d_complex(n, typ, &cfg)?;
    let c = build_word_complex(n, signed, FieldSpec::Q)?;
    let mut relabels: Vec<SparseMatrix> = Vec::new();
    for r in d.degrees() {
        s.check(d.dim(r) == c.dim(r), || {
            format!("dimension mismatch in degree {r}")
        });
        let words: std::collections::BTreeMap<InjWord, usize> = c
            .basis_at(r)
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_word().expect("word labels").clone(), i))
            .collect();
        let mut trips = Vec::new();
        let mut total = true;
        for (ci, l) in d.basis_at(r).iter().enumerate() {
            let g = match l {
                Label::Perm(g) => g,
                Label::Word(_) => unreachable!("module complexes carry group labels"),
            };
            let letters: Vec<i32> = ((n as i64 - r)..=(n as i64))
                .map(|i| g.image(i as usize))
                .collect();
            match InjWord::new(letters).ok().and_then(|w| words.get(&w).copied()) {
                Some(ri) => trips.push((ri, ci, Coef::one(FieldSpec::Q))),
                None => total = false,
            }
        }
        s.check(total, || {
            format!("the window of some representative is not an injective word in degree {r}")
        });
        relabels.push(
            SparseMatrix::from_triplets(c.dim(r), d.dim(r), FieldSpec::Q, trips)
                .expect("relabeling triplets are in range"),
        );
    }
    for r in d.degrees().skip(1) {
        let di = (r - (-1)) as usize;
        let lhs = relabels[di - 1]
            .mul(d.boundary_from(r).expect("interior degree"))
            .expect("shapes match");
        let rhs = c
            .boundary_from(r)
            .expect("interior degree")
            .mul(&relabels[di])
            .expect("shapes match");
        s.check(lhs == rhs, || {
            format!("window relabeling does not intertwine the boundaries from degree {r}")
        });
    }
    Ok(s)
}
