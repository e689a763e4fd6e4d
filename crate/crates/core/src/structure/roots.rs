//! Frobenius eigenvalues as q-monomials (and, over `F(T)`, as monomials in
//! `T` and hint factors times q-monomials).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qpoly;
use crate::linalg::Matrix;
use crate::scalars::{Field, GroundField, GroundScalar, Poly, QMonomial, RatFunc, Rational};
use crate::wd::{FamilyTwist, Twist};

/// Scalar fields whose Frobenius eigenvalues can be searched for.
pub trait TwistField: Field<Ctx = GroundField> {
    type Tw: Twist<F = Self>;

    /// Distinct roots of `p` of the supported shape.
    fn monomial_roots(p: &Poly<Self>, hints: &[GroundScalar]) -> Vec<Self::Tw>;

    fn lift(&self, target: &GroundField) -> Self;

    /// The entry as a constant of the ground field, if it is one.
    fn as_ground(&self) -> Option<GroundScalar>;
}

impl TwistField for GroundScalar {
    type Tw = QMonomial;

    fn monomial_roots(p: &Poly<GroundScalar>, _hints: &[GroundScalar]) -> Vec<QMonomial> {
        qmonomial_roots(p)
    }

    fn lift(&self, target: &GroundField) -> Self {
        self.lift_to(target)
    }

    fn as_ground(&self) -> Option<GroundScalar> {
        Some(self.clone())
    }
}

impl TwistField for RatFunc {
    type Tw = FamilyTwist;

    fn monomial_roots(p: &Poly<RatFunc>, hints: &[GroundScalar]) -> Vec<FamilyTwist> {
        family_roots(p, hints)
    }

    fn lift(&self, target: &GroundField) -> Self {
        self.lift_to(target)
    }

    fn as_ground(&self) -> Option<GroundScalar> {
        self.as_constant()
    }
}

fn ell_valuation(r: &Rational, ell: u64) -> i64 {
    let ell = BigInt::from(ell);
    let count = |n: &BigInt| {
        let mut n = n.clone();
        let mut k = 0;
        while !n.is_zero() && (&n % &ell).is_zero() {
            n /= &ell;
            k += 1;
        }
        k
    };
    count(r.numer()) - count(r.denom())
}

/// Strip factors of `X`; zero is never a Frobenius eigenvalue.
fn strip_x<F: Field>(p: &Poly<F>) -> Poly<F> {
    let c = p.coeffs();
    let k = c.iter().take_while(|x| x.is_zero()).count();
    Poly::new(p.ctx(), c[k.min(c.len())..].to_vec())
}

/// Distinct q-monomial roots of `p` at the level of its field.
///
/// Half-exponents come from the `ell`-adic Newton polygon of the norm of `p`
/// down to `Q`; for each half-exponent and root of unity the remaining unit
/// is a positive rational root of every coordinate polynomial.
pub fn qmonomial_roots(p: &Poly<GroundScalar>) -> Vec<QMonomial> {
    let field = p.ctx().clone();
    let params = field.params();
    let p = strip_x(p).squarefree_part();
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut norm = Poly::one(&field);
    for (j, flip) in field.galois_group() {
        norm = norm.mul(&p.map(&field, |c| c.conjugate(j, flip)));
    }
    let points: Vec<(i64, i64)> = norm
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let r = c.as_rational().expect("norm has rational coefficients");
            (i as i64, ell_valuation(&r, params.ell))
        })
        .collect();
    let mut halves: Vec<i64> = qpoly::newton_slopes(&points)
        .into_iter()
        .filter(|&(num, den)| (2 * num) % den == 0)
        .map(|(num, den)| -2 * num / den)
        .collect();
    halves.sort_unstable();
    halves.dedup();

    let n = params.level as i64;
    let signs: &[i8] = if n % 2 == 0 { &[1] } else { &[1, -1] };
    let deg = p.degree().unwrap();
    let mut out: Vec<QMonomial> = Vec::new();
    for &e in &halves {
        for a in 0..n {
            for &sign in signs {
                let c = QMonomial {
                    half: e,
                    unit: Rational::one(),
                    zeta: a as u32,
                    sign,
                    level: params.level,
                };
                let Some(cv) = c.to_scalar(&field) else { continue };
                let mut cpow = GroundScalar::one(&field);
                let mut scaled: Vec<Vec<Rational>> = Vec::with_capacity(deg + 1);
                for coeff in p.coeffs() {
                    scaled.push(coeff.mul(&cpow).coords());
                    cpow = cpow.mul(&cv);
                }
                let dim = scaled[0].len();
                let mut g: Vec<Rational> = Vec::new();
                for j in 0..dim {
                    let qj: Vec<Rational> = scaled.iter().map(|v| v[j].clone()).collect();
                    g = qpoly::gcd(&g, &qj);
                    if g.len() == 1 {
                        break;
                    }
                }
                for u in qpoly::positive_rational_roots(&g) {
                    // u has no ell content when e is the exact valuation
                    let root = QMonomial { unit: u, ..c.clone() };
                    let canon = crate::scalars::canonicalize_qmonomial(
                        &(if root.sign < 0 { -root.unit.clone() } else { root.unit.clone() }),
                        root.zeta as i64,
                        root.half,
                        &params,
                    )
                    .expect("nonzero");
                    if !out.contains(&canon) {
                        out.push(canon);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn t_minus(field: &GroundField, c: &GroundScalar) -> RatFunc {
    RatFunc::t(field).sub(&RatFunc::constant(c.clone()))
}

/// Integer slopes of the Newton polygon of `p` at `T = c`, as root orders.
fn orders_at(p: &Poly<RatFunc>, c: &GroundScalar) -> Vec<i64> {
    let points: Vec<(i64, i64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.valuation_at(c).map(|v| (i as i64, v)))
        .collect();
    let mut ks: Vec<i64> = qpoly::newton_slopes(&points)
        .into_iter()
        .filter(|&(_, den)| den == 1)
        .map(|(num, _)| -num)
        .collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn poly_lcm(a: &Poly<GroundScalar>, b: &Poly<GroundScalar>) -> Poly<GroundScalar> {
    let g = a.gcd(b);
    a.mul(&b.exact_div(&g).expect("gcd divides")).monic()
}

/// Distinct roots of `p` of the form `T^k * prod (T - h_j)^{m_j} * mu` with
/// `mu` a q-monomial.
pub fn family_roots(p: &Poly<RatFunc>, hints: &[GroundScalar]) -> Vec<FamilyTwist> {
    let field = p.ctx().clone();
    let p = strip_x(p);
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut centres = vec![GroundScalar::zero(&field)];
    for h in hints {
        if !centres.contains(h) {
            centres.push(h.clone());
        }
    }
    let options: Vec<Vec<i64>> = centres.iter().map(|c| orders_at(&p, c)).collect();
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let mut combos: Vec<Vec<i64>> = vec![Vec::new()];
    for o in &options {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                o.iter().map(move |&k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    let mut out: Vec<FamilyTwist> = Vec::new();
    for combo in combos {
        let mut w = RatFunc::one(&field);
        for (c, &k) in centres.iter().zip(&combo) {
            w = w.mul(&t_minus(&field, c).pow(k).expect("nonzero"));
        }
        let mut wpow = RatFunc::one(&field);
        let mut scaled = Vec::with_capacity(p.coeffs().len());
        for coeff in p.coeffs() {
            scaled.push(coeff.mul(&wpow));
            wpow = wpow.mul(&w);
        }
        let l = scaled.iter().fold(Poly::one(&field), |acc, x| poly_lcm(&acc, x.den()));
        let polys: Vec<Poly<GroundScalar>> = scaled
            .iter()
            .map(|x| x.num().mul(&l.exact_div(x.den()).expect("lcm")))
            .collect();
        let tdeg = polys.iter().filter_map(|q| q.degree()).max().unwrap_or(0);
        let mut g = Poly::zero(&field);
        for t in 0..=tdeg {
            let qt = Poly::new(&field, polys.iter().map(|q| q.coeff(t)).collect());
            g = g.gcd(&qt);
            if g.degree() == Some(0) {
                break;
            }
        }
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for mu in qmonomial_roots(&g) {
            let cand = FamilyTwist::new(w.clone(), mu);
            if !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// Entries as ground constants, if all of them are.
pub(crate) fn ground_matrix<F: TwistField>(m: &Matrix<F>) -> Option<Matrix<GroundScalar>> {
    m.try_map(m.ctx(), |x| x.as_ground().ok_or(())).ok()
}
