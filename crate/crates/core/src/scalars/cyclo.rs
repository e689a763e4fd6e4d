use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Rational;

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, ascending.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        quot[i] = c.clone();
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Integer numerators over a common (positive) denominator.
pub(crate) fn clear_denominators(a: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for c in a {
        if !c.denom().is_one() && !(&den % c.denom()).is_zero() {
            den = den.lcm(c.denom());
        }
    }
    let nums = a
        .iter()
        .map(|c| if c.denom() == &den { c.numer().clone() } else { c.numer() * (&den / c.denom()) })
        .collect();
    (nums, den)
}

pub(crate) fn with_denominator(nums: Vec<BigInt>, den: &BigInt) -> Vec<Rational> {
    nums.into_iter()
        .map(|c| {
            if c.is_zero() {
                Rational::zero()
            } else if den.is_one() {
                Rational::from_integer(c)
            } else {
                Rational::new(c, den.clone())
            }
        })
        .collect()
}

/// Arithmetic tables for `Q(zeta_N) = Q[x]/Phi_N(x)` in the power basis.
#[derive(Debug)]
pub struct CycloCtx {
    level: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    /// `zeta^k` in the power basis for `0 <= k < N`.
    zeta_pows: Vec<Vec<Rational>>,
    /// The same table; the cyclotomic polynomial is monic, so it is integral.
    zeta_ints: Vec<Vec<BigInt>>,
}

static CYCLO_CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();

impl CycloCtx {
    pub fn get(level: u32) -> Arc<CycloCtx> {
        let cache = CYCLO_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry(level)
            .or_insert_with(|| Arc::new(CycloCtx::build(level)))
            .clone()
    }

    fn build(level: u32) -> CycloCtx {
        let modulus = cyclotomic_polynomial(level);
        let degree = modulus.len() - 1;
        let mut zeta_pows = Vec::with_capacity(level as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..level {
            zeta_pows.push(cur.clone());
            // multiply by x and fold the overflow coefficient back
            let top = cur[degree - 1].clone();
            let mut next = vec![Rational::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, m) in modulus.iter().take(degree).enumerate() {
                    next[i] -= &top * BigRational::from_integer(m.clone());
                }
            }
            cur = next;
        }
        let zeta_ints = zeta_pows.iter().map(|z| z.iter().map(|c| c.to_integer()).collect()).collect();
        CycloCtx {
            level,
            degree,
            modulus,
            zeta_pows,
            zeta_ints,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero_raw(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.degree]
    }

    pub fn zeta_raw(&self, a: i64) -> Vec<Rational> {
        let n = self.level as i64;
        self.zeta_pows[a.rem_euclid(n) as usize].clone()
    }

    pub fn add_raw(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub_raw(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn mul_raw(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if self.degree == 1 {
            return vec![&a[0] * &b[0]];
        }
        let (ai, da) = clear_denominators(a);
        let (bi, db) = clear_denominators(b);
        with_denominator(self.mul_int(&ai, &bi), &(da * db))
    }

    /// Product of integral power-basis vectors.
    pub(crate) fn mul_int(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (o, z) in out.iter_mut().zip(&self.zeta_ints[k % self.level as usize]) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        out
    }

    fn galois_int(&self, a: &[BigInt], j: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree];
        let n = self.level as u64;
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as u64 * j as u64) % n;
            for (o, z) in out.iter_mut().zip(&self.zeta_ints[k as usize]) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        out
    }

    pub fn scale_raw(&self, a: &[Rational], r: &Rational) -> Vec<Rational> {
        a.iter().map(|x| x * r).collect()
    }

    pub fn is_zero_raw(a: &[Rational]) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// Inverse as the product of the other Galois conjugates over the norm.
    pub fn inv_raw(&self, a: &[Rational]) -> Option<Vec<Rational>> {
        if Self::is_zero_raw(a) {
            return None;
        }
        if self.degree == 1 {
            return Some(vec![a[0].recip()]);
        }
        let (ai, den) = clear_denominators(a);
        let mut others = vec![BigInt::zero(); self.degree];
        others[0] = BigInt::one();
        for j in self.galois_exponents().into_iter().skip(1) {
            others = self.mul_int(&others, &self.galois_int(&ai, j));
        }
        let norm = self.mul_int(&ai, &others);
        debug_assert!(norm.iter().skip(1).all(|c| c.is_zero()));
        let norm = norm.into_iter().next().unwrap();
        let scaled: Vec<BigInt> = others.into_iter().map(|c| c * &den).collect();
        Some(with_denominator(scaled, &norm))
    }

    /// Image under the automorphism `zeta -> zeta^j` (`j` prime to `N`).
    pub fn galois_raw(&self, a: &[Rational], j: u32) -> Vec<Rational> {
        let mut out = self.zero_raw();
        let n = self.level as u64;
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as u64 * j as u64) % n;
            for (o, z) in out.iter_mut().zip(&self.zeta_pows[k as usize]) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        out
    }

    /// Units of `Z/N`, i.e. the exponents of the Galois group.
    pub fn galois_exponents(&self) -> Vec<u32> {
        (1..=self.level).filter(|j| j.gcd(&self.level) == 1).collect()
    }

    /// Re-embed into level `m * N` via `zeta_N = zeta_{mN}^m`.
    pub fn lift_raw(&self, a: &[Rational], target: &CycloCtx) -> Vec<Rational> {
        assert_eq!(target.level % self.level, 0, "target level must be a multiple");
        let m = (target.level / self.level) as i64;
        let mut out = target.zero_raw();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = target.zeta_raw(m * i as i64);
            for (o, zc) in out.iter_mut().zip(&z) {
                if !zc.is_zero() {
                    *o += c * zc;
                }
            }
        }
        out
    }
}

/// An element of `Q(zeta_N)` in the power basis.
#[derive(Clone)]
pub struct CycloElem {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<Rational>,
}

impl CycloElem {
    pub fn new(level: u32, coeffs: Vec<Rational>) -> Self {
        let ctx = CycloCtx::get(level);
        assert_eq!(coeffs.len(), ctx.degree(), "coefficient vector must have length phi(N)");
        CycloElem { ctx, coeffs }
    }

    pub fn from_rational(level: u32, r: Rational) -> Self {
        let ctx = CycloCtx::get(level);
        let mut coeffs = ctx.zero_raw();
        coeffs[0] = r;
        CycloElem { ctx, coeffs }
    }

    pub fn zeta(level: u32, a: i64) -> Self {
        let ctx = CycloCtx::get(level);
        let coeffs = ctx.zeta_raw(a);
        CycloElem { ctx, coeffs }
    }

    pub fn level(&self) -> u32 {
        self.ctx.level()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        CycloCtx::is_zero_raw(&self.coeffs)
    }

    pub fn add(&self, o: &Self) -> Self {
        CycloElem {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.add_raw(&self.coeffs, &o.coeffs),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CycloElem {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.sub_raw(&self.coeffs, &o.coeffs),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CycloElem {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.mul_raw(&self.coeffs, &o.coeffs),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        self.ctx.inv_raw(&self.coeffs).map(|coeffs| CycloElem {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.level() == other.ctx.level() && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem(N={}, {:?})", self.level(), self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

/// `true` iff the rational is a perfect square of a rational.
pub(crate) fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
