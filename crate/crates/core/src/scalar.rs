//! Exact scalars: arbitrary-precision rationals and prime fields F_p, plus
//! the run configuration (field, Hecke parameter q) threaded through every
//! algebraic computation. No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse {0:?} as an exact scalar (use integers or fractions like 1/3)")]
    BadLiteral(String),
    #[error("cannot parse {0:?} as a field (expected Q or Fp:<prime>)")]
    BadField(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("q = {0} is not invertible in {1}")]
    NonInvertibleQ(String, FieldSpec),
}

/// The coefficient field of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        if s == "Q" {
            return Ok(FieldSpec::Q);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.parse().map_err(|_| ScalarError::BadField(s.to_string()))?;
            if !is_prime(p) {
                return Err(ScalarError::NotPrime(p));
            }
            return Ok(FieldSpec::Fp(p));
        }
        Err(ScalarError::BadField(s.to_string()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. The two variants never mix: a computation is set
/// up over one field by a [`ScalarConfig`] and stays there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coef {
    Rat(BigRational),
    Fp { p: u64, v: u64 },
}

impl Coef {
    pub fn zero(field: FieldSpec) -> Coef {
        match field {
            FieldSpec::Q => Coef::Rat(BigRational::zero()),
            FieldSpec::Fp(p) => Coef::Fp { p, v: 0 },
        }
    }

    pub fn one(field: FieldSpec) -> Coef {
        match field {
            FieldSpec::Q => Coef::Rat(BigRational::one()),
            FieldSpec::Fp(p) => Coef::Fp { p, v: 1 },
        }
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Coef {
        match field {
            FieldSpec::Q => Coef::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Fp(p) => Coef::Fp {
                p,
                v: v.rem_euclid(p as i64) as u64,
            },
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Coef::Rat(_) => FieldSpec::Q,
            Coef::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_zero(),
            Coef::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_one(),
            Coef::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a + b),
            (Coef::Fp { p, v: a }, Coef::Fp { p: p2, v: b }) => {
                debug_assert_eq!(p, p2);
                Coef::Fp {
                    p: *p,
                    v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn sub(&self, other: &Coef) -> Coef {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coef {
        match self {
            Coef::Rat(a) => Coef::Rat(-a),
            Coef::Fp { p, v } => Coef::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn mul(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a * b),
            (Coef::Fp { p, v: a }, Coef::Fp { p: p2, v: b }) => {
                debug_assert_eq!(p, p2);
                Coef::Fp {
                    p: *p,
                    v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn inv(&self) -> Result<Coef, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Coef::Rat(a) => Coef::Rat(a.recip()),
            Coef::Fp { p, v } => Coef::Fp {
                p: *p,
                v: fp_pow(*v, p - 2, *p),
            },
        })
    }

    /// Integer power with negative exponents allowed (element must then be
    /// invertible; callers guarantee this for q).
    pub fn pow(&self, e: i64) -> Coef {
        if e < 0 {
            return self.inv().expect("negative power of a zero scalar").pow(-e);
        }
        let mut acc = Coef::one(self.field());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Parse an exact literal: an integer or a fraction a/b. Decimal and
    /// scientific notation are rejected on purpose.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Coef, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::BadLiteral(s.to_string());
        if s.contains(['.', 'e', 'E']) || s.is_empty() {
            return Err(bad());
        }
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den_s.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match field {
            FieldSpec::Q => Ok(Coef::Rat(BigRational::new(num, den))),
            FieldSpec::Fp(p) => {
                let pb = BigInt::from(p);
                let nv = ((num % &pb) + &pb) % &pb;
                let dv = ((den % &pb) + &pb) % &pb;
                let nv: u64 = nv.try_into().unwrap();
                let dv: u64 = dv.try_into().unwrap();
                if dv == 0 {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Coef::Fp {
                    p,
                    v: mul_mod(nv, fp_pow(dv, p - 2, p), p),
                })
            }
        }
    }

    /// The rational value, when over Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coef::Rat(r) => Some(r),
            Coef::Fp { .. } => None,
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coef::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Serialize for Coef {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Field and Hecke parameter for a run. Construction checks that q is
/// invertible, since the boundary operators use negative powers of q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarConfig {
    field: FieldSpec,
    q: Coef,
}

impl ScalarConfig {
    pub fn new(field: FieldSpec, q: Coef) -> Result<Self, ScalarError> {
        debug_assert_eq!(q.field(), field);
        if q.is_zero() {
            return Err(ScalarError::NonInvertibleQ(q.to_string(), field));
        }
        Ok(ScalarConfig { field, q })
    }

    pub fn rational(q: &str) -> Result<Self, ScalarError> {
        let q = Coef::parse(q, FieldSpec::Q)?;
        ScalarConfig::new(FieldSpec::Q, q)
    }

    pub fn prime(p: u64, q: &str) -> Result<Self, ScalarError> {
        let field = FieldSpec::parse(&format!("Fp:{p}"))?;
        let q = Coef::parse(q, field)?;
        ScalarConfig::new(field, q)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn q(&self) -> &Coef {
        &self.q
    }

    pub fn q_pow(&self, e: i64) -> Coef {
        self.q.pow(e)
    }

    pub fn zero(&self) -> Coef {
        Coef::zero(self.field)
    }

    pub fn one(&self) -> Coef {
        Coef::one(self.field)
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        Coef::from_i64(self.field, v)
    }
}
