use std::fmt;
use std::hash::{Hash, Hasher};

use super::{render_terms, Field, GroundField, GroundScalar, Poly, Rational, ResidueParams, Term};
use crate::error::{Error, Result};

/// A rational function in `T` over the ground field, kept reduced with a
/// monic denominator.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly<GroundScalar>,
    den: Poly<GroundScalar>,
}

impl RatFunc {
    /// Reduce `num/den`; `None` if `den = 0`.
    pub fn from_polys(num: Poly<GroundScalar>, den: Poly<GroundScalar>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            let ctx = den.ctx().clone();
            return Some(RatFunc {
                num,
                den: Poly::one(&ctx),
            });
        }
        if den.degree() == Some(0) {
            let c = den.lead().unwrap().inv().unwrap();
            let ctx = den.ctx().clone();
            return Some(RatFunc {
                num: num.scale(&c),
                den: Poly::one(&ctx),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = den.lead().unwrap().inv().unwrap();
        Some(RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn from_poly(num: Poly<GroundScalar>) -> Self {
        let ctx = num.ctx().clone();
        RatFunc {
            num,
            den: Poly::one(&ctx),
        }
    }

    pub fn constant(c: GroundScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The family variable `T`.
    pub fn t(field: &GroundField) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn num(&self) -> &Poly<GroundScalar> {
        &self.num
    }

    pub fn den(&self) -> &Poly<GroundScalar> {
        &self.den
    }

    pub fn field(&self) -> &GroundField {
        self.num.ctx()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<GroundScalar> {
        if self.is_polynomial() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Exact value at `T = tau`.
    pub fn eval(&self, tau: &GroundScalar) -> Result<GroundScalar> {
        let d = self.den.eval(tau);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(tau).div(&d).unwrap())
    }

    /// Substitute `T -> inner`.
    pub fn compose(&self, inner: &RatFunc) -> Option<RatFunc> {
        let horner = |p: &Poly<GroundScalar>| {
            let mut acc = RatFunc::zero(self.field());
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(inner).add(&RatFunc::constant(c.clone()));
            }
            acc
        };
        horner(&self.num).div(&horner(&self.den))
    }

    fn order_at(p: &Poly<GroundScalar>, c: &GroundScalar) -> i64 {
        let lin = Poly::linear_root(c);
        let mut p = p.clone();
        let mut k = 0;
        while !p.is_zero() {
            match p.exact_div(&lin) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }

    /// Order of vanishing at `T = c` (negative for poles); `None` for zero.
    pub fn valuation_at(&self, c: &GroundScalar) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::order_at(&self.num, c) - Self::order_at(&self.den, c))
    }

    /// `deg den - deg num`, the valuation at infinity.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        Some(self.den.degree()? as i64 - self.num.degree()? as i64)
    }

    pub fn lift_to(&self, target: &GroundField) -> RatFunc {
        let n = self.num.map(target, |c| c.lift_to(target));
        let d = self.den.map(target, |c| c.lift_to(target));
        RatFunc::from_polys(n, d).unwrap()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Field for RatFunc {
    type Ctx = GroundField;

    fn ctx(&self) -> &GroundField {
        self.num.ctx()
    }

    fn zero(ctx: &GroundField) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    fn one(ctx: &GroundField) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    fn from_rational(ctx: &GroundField, r: &Rational) -> Self {
        Self::constant(GroundScalar::from_rational(ctx, r))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        if self.is_polynomial() && o.is_polynomial() {
            return Self::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::from_polys(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::from_polys(n, self.den.mul(&o.den)).unwrap()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_polynomial() && o.is_polynomial() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        Self::from_polys(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Self::from_polys(self.den.clone(), self.num.clone())
    }

    fn zeta(ctx: &GroundField, a: i64) -> Self {
        Self::constant(GroundScalar::zeta(ctx, a))
    }

    fn q_power(ctx: &GroundField, k: i64) -> Self {
        Self::constant(GroundScalar::q_power(ctx, k))
    }

    fn params(ctx: &GroundField) -> ResidueParams {
        ctx.params()
    }

    fn terms(&self) -> Vec<Term> {
        if self.is_polynomial() {
            let mut out = Vec::new();
            for (k, c) in self.num.coeffs().iter().enumerate() {
                for mut t in c.terms() {
                    match k {
                        0 => {}
                        1 => t.monomial.push("T".to_string()),
                        _ => t.monomial.push(format!("T^{k}")),
                    }
                    out.push(t);
                }
            }
            out
        } else {
            vec![Term::new(
                Rational::from_integer(1.into()),
                vec![format!("({})/({})", self.num.display_with("T"), self.den.display_with("T"))],
            )]
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.terms()))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
