use std::fmt;

use super::{render_terms, Field, Rational, Term};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ctx == other.ctx
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> std::hash::Hash for Poly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one(ctx))
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx().clone();
        Self::new(&ctx, vec![c])
    }

    /// The variable `X`.
    pub fn x(ctx: &F::Ctx) -> Self {
        Self::monomial(F::one(ctx), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![F::zero(&ctx); k];
        coeffs.push(c);
        Self::new(&ctx, coeffs)
    }

    /// `X - a`.
    pub fn linear_root(a: &F) -> Self {
        let ctx = a.ctx().clone();
        Self::new(&ctx, vec![a.neg(), F::one(&ctx)])
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![F::zero(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(&self.ctx, out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().unwrap().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut quot = vec![F::zero(&self.ctx); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].mul(&lead_inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].sub(&c.mul(dc));
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(&self.ctx, quot), Self::new(&self.ctx, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|l| l.is_one())
    }

    /// Monic remainder sequence; normalizing each step keeps coefficient
    /// growth in check.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    /// `(g, u, v)` with `u*self + v*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let ctx = &self.ctx;
        if self.is_zero() && o.is_zero() {
            return (Self::zero(ctx), Self::one(ctx), Self::zero(ctx));
        }
        // invariant: r_i = s_i * self + t_i * o, with r_i monic
        let norm = |r: Self, s: Self, t: Self| match r.lead().cloned() {
            None => (r, s, t),
            Some(l) => {
                let li = l.inv().unwrap();
                (r.scale(&li), s.scale(&li), t.scale(&li))
            }
        };
        let (mut r0, mut s0, mut t0) = norm(self.clone(), Self::one(ctx), Self::zero(ctx));
        let (mut r1, mut s1, mut t1) = norm(o.clone(), Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let (r2, s2, t2) = norm(r, s0.sub(&q.mul(&s1)), t0.sub(&q.mul(&t1)));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.mul(&F::from_int(&self.ctx, i as i64)))
            .collect();
        Self::new(&self.ctx, c)
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).unwrap().monic()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `p(c * X)`.
    pub fn scale_var(&self, c: &F) -> Self {
        let mut pw = F::one(&self.ctx);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.mul(&pw));
            pw = pw.mul(c);
        }
        Self::new(&self.ctx, out)
    }

    /// `X^deg * p(1/X)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(&self.ctx, c)
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(ctx, self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<G: Field, E>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> Result<G, E>) -> Result<Poly<G>, E> {
        let c = self.coeffs.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Poly::new(ctx, c))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&F::from_rational(&self.ctx, r))
    }

    pub fn display_with(&self, var: &str) -> String {
        let mut terms: Vec<Term> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for mut t in c.terms() {
                match k {
                    0 => {}
                    1 => t.monomial.push(var.to_string()),
                    _ => t.monomial.push(format!("{var}^{k}")),
                }
                terms.push(t);
            }
        }
        render_terms(&terms)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("X"))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.display_with("X"))
    }
}
