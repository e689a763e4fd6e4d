//! Exact scalars: rationals, cyclotomic fields with `sqrt(q)` adjoined,
//! q-monomials, univariate polynomials and rational functions in `T`.
//!
//! Everything here is arbitrary precision. Values carry a handle to the
//! field they live in so that generic code never needs a separate context.

mod cyclo;
mod ground;
mod parse;
mod poly;
mod qmono;
mod ratfunc;

pub use cyclo::{cyclotomic_polynomial, euler_phi, CycloCtx, CycloElem};
pub use ground::{GroundField, GroundScalar, SqrtMode};
pub use parse::{parse_ground, parse_ratfunc, ParseError};
pub use poly::Poly;
pub use qmono::{canonicalize_qmonomial, weight_of, QMonomial};
pub use ratfunc::RatFunc;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Residue characteristic, residue degree and the working cyclotomic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueParams {
    pub ell: u64,
    pub f: u32,
    pub q: u64,
    pub level: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ResidueParams {
    pub fn new(ell: u64, f: u32, level: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::InvalidParams(format!("ell = {ell} is not prime")));
        }
        if f == 0 {
            return Err(Error::InvalidParams("f must be positive".into()));
        }
        if level == 0 {
            return Err(Error::InvalidParams("cyclotomic level must be positive".into()));
        }
        let q = ell
            .checked_pow(f)
            .ok_or_else(|| Error::InvalidParams("q = ell^f overflows".into()))?;
        Ok(ResidueParams { ell, f, q, level })
    }

    /// Validates a stated `q` against `ell^f`.
    pub fn with_q(ell: u64, f: u32, q: u64, level: u32) -> Result<Self> {
        let p = Self::new(ell, f, level)?;
        if p.q != q {
            return Err(Error::InvalidParams(format!(
                "q = {q} but ell^f = {}^{} = {}",
                ell, f, p.q
            )));
        }
        Ok(p)
    }

    pub fn at_level(&self, level: u32) -> Self {
        ResidueParams { level, ..*self }
    }

    /// Same residue field, ignoring the cyclotomic level.
    pub fn same_residue(&self, other: &Self) -> bool {
        self.ell == other.ell && self.f == other.f
    }
}

impl fmt::Display for ResidueParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ell={} f={} q={} N={}", self.ell, self.f, self.q, self.level)
    }
}

/// A field of characteristic zero whose elements know their field.
///
/// Method names deliberately avoid `std::ops` so generic code never has to
/// spell out reference-operator bounds.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> &Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    /// The root of unity `zeta_N^a` of the working level.
    fn zeta(ctx: &Self::Ctx, a: i64) -> Self;
    /// `q^k` for an integer `k`.
    fn q_power(ctx: &Self::Ctx, k: i64) -> Self;
    fn params(ctx: &Self::Ctx) -> ResidueParams;

    fn from_int(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_rational(ctx, &int(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.ctx())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.ctx());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Some(acc)
    }

    fn scale_rational(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(self.ctx(), r))
    }

    /// Signed monomial terms, used by every textual rendering.
    fn terms(&self) -> Vec<Term>;
}

/// One summand `coeff * m_1 * m_2 * ...` of a printed scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    pub monomial: Vec<String>,
}

impl Term {
    pub fn new(coeff: Rational, monomial: Vec<String>) -> Self {
        Term { coeff, monomial }
    }
}

fn render_rational(r: &Rational, in_product: bool) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if in_product {
        format!("({}/{})", r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text for a sum of terms, e.g. `1 - (1/3)*X` or `-z^2*s + 5`.
pub fn render_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        let abs = t.coeff.abs();
        let body = if t.monomial.is_empty() {
            render_rational(&abs, false)
        } else if abs.is_one() {
            t.monomial.join("*")
        } else {
            format!("{}*{}", render_rational(&abs, true), t.monomial.join("*"))
        };
        match (i, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    out
}
