use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Field, GroundField, GroundScalar, Rational, ResidueParams};
use crate::error::{Error, Result};

/// The scalar `sign * unit * zeta_N^zeta * ell^(half/2)` in canonical form.
///
/// Canonical means: `unit > 0` with no factor of `ell`, `zeta` reduced mod
/// `N`, and when `N` is even the sign is folded into `zeta` (so `sign = +1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    pub half: i64,
    pub unit: Rational,
    pub zeta: u32,
    pub sign: i8,
    pub level: u32,
}

fn strip_ell(n: &BigInt, ell: &BigInt) -> (BigInt, i64) {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(ell);
        if !r.is_zero() {
            return (n, k);
        }
        n = q;
        k += 1;
    }
}

fn normalize(sign: i8, unit: Rational, zeta: i64, half: i64, level: u32) -> QMonomial {
    let n = level as i64;
    let mut zeta = zeta.rem_euclid(n);
    let mut sign = sign;
    if sign < 0 && n % 2 == 0 {
        zeta = (zeta + n / 2).rem_euclid(n);
        sign = 1;
    }
    QMonomial {
        half,
        unit,
        zeta: zeta as u32,
        sign,
        level,
    }
}

/// Canonical form of `r * zeta_N^a * ell^(m/2)`.
pub fn canonicalize_qmonomial(r: &Rational, a: i64, m: i64, params: &ResidueParams) -> Result<QMonomial> {
    if r.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let ell = BigInt::from(params.ell);
    let sign = if r.is_negative() { -1 } else { 1 };
    let (num, kn) = strip_ell(&r.numer().abs(), &ell);
    let (den, kd) = strip_ell(r.denom(), &ell);
    let unit = Rational::new(num, den);
    Ok(normalize(sign, unit, a, m + 2 * (kn - kd), params.level))
}

/// Weight `w` when every archimedean conjugate has absolute value `q^(w/2)`.
pub fn weight_of(alpha: &QMonomial, params: &ResidueParams) -> Option<i64> {
    let f = params.f as i64;
    if alpha.unit.is_one() && alpha.half % f == 0 {
        Some(alpha.half / f)
    } else {
        None
    }
}

impl QMonomial {
    pub fn one(level: u32) -> Self {
        normalize(1, Rational::one(), 0, 0, level)
    }

    /// `q^k`.
    pub fn q_power(k: i64, params: &ResidueParams) -> Self {
        normalize(1, Rational::one(), 0, 2 * params.f as i64 * k, params.level)
    }

    pub fn zeta_power(a: i64, level: u32) -> Self {
        normalize(1, Rational::one(), a, 0, level)
    }

    pub fn from_rational(r: &Rational, params: &ResidueParams) -> Result<Self> {
        canonicalize_qmonomial(r, 0, 0, params)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.level, o.level, "q-monomials at different levels");
        normalize(
            self.sign * o.sign,
            &self.unit * &o.unit,
            self.zeta as i64 + o.zeta as i64,
            self.half + o.half,
            self.level,
        )
    }

    pub fn inv(&self) -> Self {
        normalize(self.sign, self.unit.recip(), -(self.zeta as i64), -self.half, self.level)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = QMonomial::one(self.level);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Re-express at a level that is a multiple of the current one.
    pub fn lift_to_level(&self, level: u32) -> Self {
        assert_eq!(level % self.level, 0);
        let m = (level / self.level) as i64;
        normalize(self.sign, self.unit.clone(), self.zeta as i64 * m, self.half, level)
    }

    /// The scalar inside `Q(zeta_N)(sqrt q)`, or `None` when an odd power of
    /// `sqrt(ell)` is needed but `sqrt(ell)` is not in the field.
    pub fn to_scalar(&self, field: &GroundField) -> Option<GroundScalar> {
        if field.level() != self.level {
            return None;
        }
        let ell = field.params().ell as i64;
        let mut x = GroundScalar::from_rational(field, &self.unit);
        if self.sign < 0 {
            x = x.neg();
        }
        x = x.mul(&GroundScalar::zeta(field, self.zeta as i64));
        let whole = self.half.div_euclid(2);
        let ell_pow = GroundScalar::from_int(field, ell).pow(whole)?;
        x = x.mul(&ell_pow);
        if self.half.rem_euclid(2) == 1 {
            x = x.mul(&field.sqrt_ell()?);
        }
        Some(x)
    }

    pub fn is_one(&self) -> bool {
        self.half == 0 && self.unit.is_one() && self.zeta == 0 && self.sign > 0
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.unit.is_one() || (self.zeta == 0 && self.half == 0) {
            parts.push(self.unit.to_string());
        }
        if self.zeta != 0 {
            parts.push(if self.zeta == 1 {
                "z".to_string()
            } else {
                format!("z^{}", self.zeta)
            });
        }
        if self.half != 0 {
            parts.push(format!("ell^({}/2)", self.half));
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        write!(f, "{}", parts.join("*"))
    }
}
