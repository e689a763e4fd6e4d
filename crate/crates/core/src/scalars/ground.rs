use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cyclo::{clear_denominators, rational_sqrt, with_denominator, CycloCtx, CycloElem};
use super::{int, Field, Rational, ResidueParams, Term};

/// How `s = sqrt(q)` is realised inside the working field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SqrtMode {
    /// `sqrt(q)` already lies in `Q(zeta_N)`; stored as its power-basis coordinates.
    Embedded(Vec<Rational>),
    /// `s` is adjoined formally with `s^2 = q`.
    Formal,
}

#[derive(Debug)]
pub struct GroundCtx {
    params: ResidueParams,
    cyclo: Arc<CycloCtx>,
    sqrt_q: SqrtMode,
    /// `sqrt(ell)` as (even, odd) parts when it lies in the field.
    sqrt_ell: Option<(Vec<Rational>, Vec<Rational>)>,
}

/// Handle to the field `Q(zeta_N)(sqrt q)` for fixed residue parameters.
#[derive(Clone)]
pub struct GroundField(Arc<GroundCtx>);

static FIELD_CACHE: OnceLock<Mutex<HashMap<ResidueParams, GroundField>>> = OnceLock::new();

/// `sqrt(ell)` inside `Q(zeta_N)` via quadratic Gauss sums, if it lies there.
fn sqrt_ell_in_cyclo(ell: u64, cyclo: &CycloCtx) -> Option<Vec<Rational>> {
    let n = cyclo.level() as u64;
    if ell == 2 {
        if n % 8 != 0 {
            return None;
        }
        let k = (n / 8) as i64;
        return Some(cyclo.add_raw(&cyclo.zeta_raw(k), &cyclo.zeta_raw(-k)));
    }
    let need = if ell % 4 == 1 { ell } else { 4 * ell };
    if n % need != 0 {
        return None;
    }
    let step = (n / ell) as i64;
    let mut g = cyclo.zero_raw();
    for a in 1..ell {
        let chi = if legendre(a, ell) { int(1) } else { int(-1) };
        g = cyclo.add_raw(&g, &cyclo.scale_raw(&cyclo.zeta_raw(step * a as i64), &chi));
    }
    if ell % 4 == 1 {
        Some(g)
    } else {
        // g^2 = -ell, so g / i squares to ell
        let i_inv = cyclo.zeta_raw(-((n / 4) as i64));
        Some(cyclo.mul_raw(&g, &i_inv))
    }
}

fn legendre(a: u64, p: u64) -> bool {
    (1..p).any(|x| (x * x) % p == a % p)
}

impl GroundField {
    pub fn new(params: &ResidueParams) -> GroundField {
        let cache = FIELD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry(*params)
            .or_insert_with(|| GroundField(Arc::new(GroundCtx::build(*params))))
            .clone()
    }

    pub fn params(&self) -> ResidueParams {
        self.0.params
    }

    pub fn level(&self) -> u32 {
        self.0.params.level
    }

    pub fn cyclo(&self) -> &Arc<CycloCtx> {
        &self.0.cyclo
    }

    pub fn sqrt_mode(&self) -> &SqrtMode {
        &self.0.sqrt_q
    }

    pub fn is_formal(&self) -> bool {
        matches!(self.0.sqrt_q, SqrtMode::Formal)
    }

    /// Number of rational coordinates of an element.
    pub fn rational_dim(&self) -> usize {
        let d = self.0.cyclo.degree();
        if self.is_formal() {
            2 * d
        } else {
            d
        }
    }

    /// `sqrt(q)`.
    pub fn s(&self) -> GroundScalar {
        match &self.0.sqrt_q {
            SqrtMode::Embedded(c) => GroundScalar::from_parts(self, c.clone(), self.0.cyclo.zero_raw()),
            SqrtMode::Formal => {
                let mut odd = self.0.cyclo.zero_raw();
                odd[0] = int(1);
                GroundScalar::from_parts(self, self.0.cyclo.zero_raw(), odd)
            }
        }
    }

    pub fn sqrt_ell(&self) -> Option<GroundScalar> {
        self.0
            .sqrt_ell
            .as_ref()
            .map(|(e, o)| GroundScalar::from_parts(self, e.clone(), o.clone()))
    }

    /// Galois group as pairs (exponent `j` of `zeta -> zeta^j`, whether `s -> -s`).
    pub fn galois_group(&self) -> Vec<(u32, bool)> {
        let js = self.0.cyclo.galois_exponents();
        let flips: &[bool] = if self.is_formal() { &[false, true] } else { &[false] };
        js.iter()
            .flat_map(|&j| flips.iter().map(move |&fl| (j, fl)))
            .collect()
    }
}

impl GroundCtx {
    fn build(params: ResidueParams) -> GroundCtx {
        let cyclo = CycloCtx::get(params.level);
        let cyclo_sqrt_ell = sqrt_ell_in_cyclo(params.ell, &cyclo);
        let q = int(params.q as i64);
        let sqrt_q = if let Some(r) = rational_sqrt(&q) {
            let mut c = cyclo.zero_raw();
            c[0] = r;
            SqrtMode::Embedded(c)
        } else if let Some(se) = &cyclo_sqrt_ell {
            // f odd: sqrt(q) = ell^((f-1)/2) sqrt(ell)
            let k = int(params.ell.pow((params.f - 1) / 2) as i64);
            SqrtMode::Embedded(cyclo.scale_raw(se, &k))
        } else {
            SqrtMode::Formal
        };
        let sqrt_ell = if params.f % 2 == 1 {
            let k = int(params.ell.pow((params.f - 1) / 2) as i64).recip();
            match &sqrt_q {
                SqrtMode::Embedded(c) => Some((cyclo.scale_raw(c, &k), cyclo.zero_raw())),
                SqrtMode::Formal => {
                    let mut odd = cyclo.zero_raw();
                    odd[0] = k;
                    Some((cyclo.zero_raw(), odd))
                }
            }
        } else {
            cyclo_sqrt_ell.map(|c| (c, cyclo.zero_raw()))
        };
        GroundCtx {
            params,
            cyclo,
            sqrt_q,
            sqrt_ell,
        }
    }
}

impl PartialEq for GroundField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.params == other.0.params
    }
}

impl Eq for GroundField {}

impl fmt::Debug for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundField({})", self.0.params)
    }
}

/// An element `even + odd * s` of `Q(zeta_N)(s)`, `s^2 = q`.
///
/// When `sqrt(q)` already lies in `Q(zeta_N)` the odd part is always zero.
#[derive(Clone)]
pub struct GroundScalar {
    field: GroundField,
    even: Vec<Rational>,
    odd: Vec<Rational>,
}

impl GroundScalar {
    pub(crate) fn from_parts(field: &GroundField, even: Vec<Rational>, odd: Vec<Rational>) -> Self {
        GroundScalar {
            field: field.clone(),
            even,
            odd,
        }
    }

    pub fn from_cyclo(field: &GroundField, even: &CycloElem, odd: &CycloElem) -> Self {
        assert_eq!(even.level(), field.level());
        let e = even.coeffs().to_vec();
        let o = odd.coeffs().to_vec();
        match field.sqrt_mode().clone() {
            SqrtMode::Formal => Self::from_parts(field, e, o),
            SqrtMode::Embedded(s) => {
                let c = field.cyclo();
                Self::from_parts(field, c.add_raw(&e, &c.mul_raw(&o, &s)), c.zero_raw())
            }
        }
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn even_part(&self) -> CycloElem {
        CycloElem::new(self.field.level(), self.even.clone())
    }

    pub fn odd_part(&self) -> CycloElem {
        CycloElem::new(self.field.level(), self.odd.clone())
    }

    /// Rational coordinates: even part, then (for formal `s`) odd part.
    pub fn coords(&self) -> Vec<Rational> {
        let mut v = self.even.clone();
        if self.field.is_formal() {
            v.extend(self.odd.iter().cloned());
        }
        v
    }

    pub fn from_coords(field: &GroundField, coords: &[Rational]) -> Self {
        let d = field.cyclo().degree();
        let even = coords[..d].to_vec();
        let odd = if field.is_formal() {
            coords[d..2 * d].to_vec()
        } else {
            field.cyclo().zero_raw()
        };
        Self::from_parts(field, even, odd)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.odd.iter().all(|c| c.is_zero()) && self.even.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.even[0].clone())
        } else {
            None
        }
    }

    /// Apply the Galois automorphism `zeta -> zeta^j`, optionally `s -> -s`.
    pub fn conjugate(&self, j: u32, flip_s: bool) -> Self {
        let c = self.field.cyclo();
        let even = c.galois_raw(&self.even, j);
        let mut odd = c.galois_raw(&self.odd, j);
        if flip_s {
            odd = odd.into_iter().map(|x| -x).collect();
        }
        Self::from_parts(&self.field, even, odd)
    }

    /// Re-embed into the field of level `level` (a multiple of the current one).
    pub fn lift_to(&self, target: &GroundField) -> Self {
        assert!(target.params().same_residue(&self.field.params()));
        let src = self.field.cyclo();
        let dst = target.cyclo();
        let even = src.lift_raw(&self.even, dst);
        let odd = src.lift_raw(&self.odd, dst);
        let e = CycloElem::new(target.level(), even);
        let o = CycloElem::new(target.level(), odd);
        // the odd part is in units of s, which may become embedded at the higher level
        GroundScalar::from_cyclo(target, &e, &o)
    }

    fn is_zero_inner(&self) -> bool {
        CycloCtx::is_zero_raw(&self.even) && CycloCtx::is_zero_raw(&self.odd)
    }
}

impl PartialEq for GroundScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.even == other.even && self.odd == other.odd
    }
}

impl Eq for GroundScalar {}

impl Hash for GroundScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.params().hash(state);
        self.even.hash(state);
        self.odd.hash(state);
    }
}

impl Field for GroundScalar {
    type Ctx = GroundField;

    fn ctx(&self) -> &GroundField {
        &self.field
    }

    fn zero(ctx: &GroundField) -> Self {
        let z = ctx.cyclo().zero_raw();
        Self::from_parts(ctx, z.clone(), z)
    }

    fn one(ctx: &GroundField) -> Self {
        Self::from_rational(ctx, &Rational::one())
    }

    fn from_rational(ctx: &GroundField, r: &Rational) -> Self {
        let mut even = ctx.cyclo().zero_raw();
        even[0] = r.clone();
        Self::from_parts(ctx, even, ctx.cyclo().zero_raw())
    }

    fn is_zero(&self) -> bool {
        self.is_zero_inner()
    }

    fn add(&self, o: &Self) -> Self {
        let c = self.field.cyclo();
        Self::from_parts(&self.field, c.add_raw(&self.even, &o.even), c.add_raw(&self.odd, &o.odd))
    }

    fn sub(&self, o: &Self) -> Self {
        let c = self.field.cyclo();
        Self::from_parts(&self.field, c.sub_raw(&self.even, &o.even), c.sub_raw(&self.odd, &o.odd))
    }

    fn mul(&self, o: &Self) -> Self {
        let c = self.field.cyclo();
        if !self.field.is_formal() {
            return Self::from_parts(&self.field, c.mul_raw(&self.even, &o.even), c.zero_raw());
        }
        let a_odd = !CycloCtx::is_zero_raw(&self.odd);
        let b_odd = !CycloCtx::is_zero_raw(&o.odd);
        if !a_odd && !b_odd {
            return Self::from_parts(&self.field, c.mul_raw(&self.even, &o.even), c.zero_raw());
        }
        // (a + b s)(c + d s) = (ac + q bd) + (ad + bc) s, over one denominator
        let d = c.degree();
        let (ai, da) = clear_denominators(&self.coords());
        let (bi, db) = clear_denominators(&o.coords());
        let (ae, ao) = ai.split_at(d);
        let (be, bo) = bi.split_at(d);
        let q = BigInt::from(self.field.params().q);
        let mut even = c.mul_int(ae, be);
        let mut odd = vec![BigInt::zero(); d];
        if a_odd && b_odd {
            for (x, y) in even.iter_mut().zip(c.mul_int(ao, bo)) {
                *x += y * &q;
            }
        }
        if b_odd {
            odd = c.mul_int(ae, bo);
        }
        if a_odd {
            for (x, y) in odd.iter_mut().zip(c.mul_int(ao, be)) {
                *x += y;
            }
        }
        let den = da * db;
        Self::from_parts(&self.field, with_denominator(even, &den), with_denominator(odd, &den))
    }

    fn neg(&self) -> Self {
        Self::from_parts(
            &self.field,
            self.even.iter().map(|x| -x).collect(),
            self.odd.iter().map(|x| -x).collect(),
        )
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero_inner() {
            return None;
        }
        let c = self.field.cyclo();
        if CycloCtx::is_zero_raw(&self.odd) {
            let e = c.inv_raw(&self.even)?;
            return Some(Self::from_parts(&self.field, e, c.zero_raw()));
        }
        // (a + b s)^-1 = (a - b s) / (a^2 - q b^2)
        let q = int(self.field.params().q as i64);
        let norm = c.sub_raw(
            &c.mul_raw(&self.even, &self.even),
            &c.scale_raw(&c.mul_raw(&self.odd, &self.odd), &q),
        );
        let ni = c.inv_raw(&norm)?;
        let even = c.mul_raw(&self.even, &ni);
        let odd: Vec<Rational> = c.mul_raw(&self.odd, &ni).into_iter().map(|x| -x).collect();
        Some(Self::from_parts(&self.field, even, odd))
    }

    fn zeta(ctx: &GroundField, a: i64) -> Self {
        Self::from_parts(ctx, ctx.cyclo().zeta_raw(a), ctx.cyclo().zero_raw())
    }

    fn q_power(ctx: &GroundField, k: i64) -> Self {
        let q = BigInt::from(ctx.params().q);
        let r = if k >= 0 {
            Rational::from_integer(num_traits::pow(q, k as usize))
        } else {
            Rational::from_integer(num_traits::pow(q, (-k) as usize)).recip()
        };
        Self::from_rational(ctx, &r)
    }

    fn params(ctx: &GroundField) -> ResidueParams {
        ctx.params()
    }

    fn terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for (parts, s_pow) in [(&self.even, false), (&self.odd, true)] {
            for (i, c) in parts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push("z".to_string()),
                    _ => mono.push(format!("z^{i}")),
                }
                if s_pow {
                    mono.push("s".to_string());
                }
                out.push(Term::new(c.clone(), mono));
            }
        }
        out
    }
}

impl fmt::Display for GroundScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render_terms(&self.terms()))
    }
}

impl fmt::Debug for GroundScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundScalar[{}]({})", self.field.params(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn field(ell: u64, f: u32, n: u32) -> GroundField {
        GroundField::new(&ResidueParams::new(ell, f, n).unwrap())
    }

    #[test]
    fn formal_sqrt_squares_to_q() {
        let k = field(3, 1, 1);
        assert!(k.is_formal());
        let s = k.s();
        assert_eq!(s.mul(&s), GroundScalar::from_int(&k, 3));
        let x = GroundScalar::from_int(&k, 2).add(&s);
        assert_eq!(x.mul(&x.inv().unwrap()), GroundScalar::one(&k));
    }

    #[test]
    fn sqrt_q_embeds_when_available() {
        for (ell, f, n) in [(5u64, 1u32, 5u32), (2, 1, 8), (3, 1, 12), (2, 2, 1), (7, 3, 28)] {
            let k = field(ell, f, n);
            assert!(!k.is_formal(), "{ell} {f} {n}");
            let s = k.s();
            assert_eq!(s.mul(&s), GroundScalar::from_int(&k, k.params().q as i64));
        }
    }

    #[test]
    fn sqrt_ell_squares_to_ell() {
        for (ell, f, n) in [(3u64, 1u32, 1u32), (2, 2, 8), (3, 3, 1), (5, 2, 5), (3, 2, 12)] {
            let k = field(ell, f, n);
            let r = k.sqrt_ell().unwrap();
            assert_eq!(r.mul(&r), GroundScalar::from_int(&k, ell as i64));
        }
        assert!(field(2, 2, 4).sqrt_ell().is_none());
    }

    #[test]
    fn perfect_square_q_matches_rational_arithmetic() {
        let k = field(2, 2, 3);
        let s = k.s();
        assert_eq!(s, GroundScalar::from_int(&k, 2));
        let a = GroundScalar::zeta(&k, 1).add(&GroundScalar::from_rational(&k, &rat(1, 2)));
        assert_eq!(a.mul(&s), a.add(&a));
    }

    #[test]
    fn lifting_respects_sqrt() {
        let small = field(3, 1, 1);
        let big = field(3, 1, 12);
        let s = small.s().lift_to(&big);
        assert_eq!(s.mul(&s), GroundScalar::from_int(&big, 3));
        assert!(!big.is_formal());
    }
}
