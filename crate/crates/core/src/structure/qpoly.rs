//! Dense polynomials over `Q` as coefficient vectors, used by the root search.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalars::Rational;

pub(crate) fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let c = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &c * bc;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

pub(crate) fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Primitive integer multiple of `p`.
fn integral(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        v
    } else {
        v.into_iter().map(|c| c / &g).collect()
    }
}

/// Positive rational roots of `p` (deduplicated, unordered).
pub(crate) fn positive_rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut p = trim(p.to_vec());
    if p.len() < 2 {
        return Vec::new();
    }
    while p[0].is_zero() {
        p.remove(0);
        if p.len() < 2 {
            return Vec::new();
        }
    }
    if p.len() == 2 {
        let r = -&p[0] / &p[1];
        return if r.is_positive() { vec![r] } else { Vec::new() };
    }
    let z = integral(&p);
    let num_divs = divisors(&z[0].abs());
    let den_divs = divisors(&z.last().unwrap().abs());
    let mut out: Vec<Rational> = Vec::new();
    for a in &num_divs {
        for b in &den_divs {
            if !a.gcd(b).is_one() {
                continue;
            }
            let r = Rational::new(a.clone(), b.clone());
            if !out.contains(&r) && eval(&p, &r).is_zero() {
                out.push(r);
            }
        }
    }
    out
}

/// Positive divisors. Cofactors beyond `u64` that survive trial division to
/// `10^6` are treated as prime.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(n.sign() == Sign::Plus);
    let mut fac: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let add = |fac: &mut Vec<(BigInt, u32)>, p: BigInt| {
        if let Some(e) = fac.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            fac.push((p, 1));
        }
    };
    if m.to_u64().is_none() {
        let mut d = 2u64;
        while d < 1_000_000 && m.to_u64().is_none() {
            let bd = BigInt::from(d);
            while (&m % &bd).is_zero() {
                m /= &bd;
                add(&mut fac, bd.clone());
            }
            d += 1;
        }
    }
    match m.to_u64() {
        Some(v) => {
            for p in factor_u64(v) {
                add(&mut fac, BigInt::from(p));
            }
        }
        None => add(&mut fac, m),
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in fac {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64) -> Vec<u64> {
    if n <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m < 1_000_000 || is_prime_u64(m) {
            if m < 1_000_000 && !is_prime_u64(m) {
                let mut k = m;
                let mut d = 2;
                while d * d <= k {
                    while k % d == 0 {
                        out.push(d);
                        k /= d;
                    }
                    d += 1;
                }
                if k > 1 {
                    out.push(k);
                }
            } else {
                out.push(m);
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// `(v, slope-length)` pairs of the lower Newton polygon of the points
/// `(i, val_i)`, as slopes `dv/di` in lowest terms (numerator, denominator).
pub(crate) fn newton_slopes(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| {
            let (di, dv) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let g = di.gcd(&dv).max(1);
            (dv / g, di / g)
        })
        .collect()
}
