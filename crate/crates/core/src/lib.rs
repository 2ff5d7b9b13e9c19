//! Exact computational algebra for the hyperoctahedral groups B_n and their
//! Iwahori-Hecke algebras: group arithmetic and coset combinatorics, Hecke
//! multiplication in the T_w basis, the chain complexes C(n), C±(n), D(n),
//! D±(n) with their filtration, and homology / Tor computations over the
//! rationals and prime fields.

pub mod bar;
pub mod complexes;
pub mod coxeter;
pub mod hecke;
pub mod homology;
pub mod matrix;
pub mod scalar;
pub mod verify;

pub use complexes::{ComplexError, ComplexKind, InjWord, Label, LabeledComplex, WeylType};
pub use coxeter::{CoxWord, GeneratorSymbol, MVector, ParabolicSpec, Side, SignedPermutation};
pub use hecke::HeckeElement;
pub use homology::HomologyReport;
pub use matrix::SparseMatrix;
pub use scalar::{Coef, FieldSpec, ScalarConfig};
pub use verify::SuiteResult;
