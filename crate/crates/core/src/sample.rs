//! Seedable generators of random objects, for property tests and for
//! exercising the library at scale.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::Matrix;
use crate::scalars::{canonicalize_qmonomial, rat, Field, GroundField, GroundScalar, QMonomial, RatFunc, Rational, ResidueParams};
use crate::wd::{FamilyBlock, FamilyTwist, FamilyWD, GroundBlock, IrredRep, MatrixWD, SpBlock, StructuredFamilyWD, StructuredRep, StructuredWD, WdRep};

/// A rational `a/b` with `|a| <= bound` and `1 <= b <= bound`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound.max(1)))
}

/// An element with small random rational coordinates.
pub fn ground_scalar<R: Rng + ?Sized>(rng: &mut R, field: &GroundField, bound: i64) -> GroundScalar {
    let coords: Vec<Rational> = (0..field.rational_dim()).map(|_| rational(rng, bound)).collect();
    GroundScalar::from_coords(field, &coords)
}

pub fn int_matrix<R: Rng + ?Sized>(rng: &mut R, field: &GroundField, rows: usize, cols: usize, bound: i64) -> Matrix<GroundScalar> {
    let data = (0..rows * cols).map(|_| GroundScalar::from_int(field, rng.gen_range(-bound..=bound))).collect();
    Matrix::new(field, rows, cols, data).expect("sized")
}

/// A random partition of `n`, parts in decreasing order.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Lower-triangular Jordan blocks of the given sizes (`e_i -> e_{i+1}`).
pub fn jordan_nilpotent<F: Field>(ctx: &F::Ctx, parts: &[usize]) -> Matrix<F> {
    let n: usize = parts.iter().sum();
    let mut m = Matrix::zero(ctx, n, n);
    let mut off = 0;
    for &p in parts {
        for i in 1..p {
            m.set(off + i, off + i - 1, F::one(ctx));
        }
        off += p;
    }
    m
}

/// A conjugated nilpotent matrix together with its Jordan type and the
/// change of basis used.
pub fn nilpotent<R: Rng + ?Sized>(rng: &mut R, field: &GroundField, n: usize) -> (Matrix<GroundScalar>, Vec<usize>, Matrix<GroundScalar>) {
    let parts = partition(rng, n);
    let j = jordan_nilpotent(field, &parts);
    let p = Matrix::random_unimodular(field, n, rng);
    let m = p.mul(&j).mul(&p.inverse().expect("unimodular"));
    (m, parts, p)
}

/// `P (D + M) P^{-1}` with `D` diagonal (repeated eigenvalues) and `M`
/// nilpotent commuting with `D`; returns the matrix and `(PDP^{-1}, PMP^{-1})`.
pub fn jordan_chevalley_case<R: Rng + ?Sized>(
    rng: &mut R,
    field: &GroundField,
    n: usize,
) -> (Matrix<GroundScalar>, Matrix<GroundScalar>, Matrix<GroundScalar>) {
    let mut d = Matrix::zero(field, n, n);
    let mut nil = Matrix::zero(field, n, n);
    let mut off = 0;
    while off < n {
        let size = rng.gen_range(1..=(n - off).min(3));
        let mut ev = 0;
        while ev == 0 {
            ev = rng.gen_range(-4..=4);
        }
        for i in 0..size {
            d.set(off + i, off + i, GroundScalar::from_int(field, ev));
            for j in 0..i {
                nil.set(off + i, off + j, GroundScalar::from_int(field, rng.gen_range(-2..=2)));
            }
        }
        off += size;
    }
    let p = Matrix::random_unimodular(field, n, rng);
    let pi = p.inverse().expect("unimodular");
    let c = |m: &Matrix<GroundScalar>| p.mul(m).mul(&pi);
    (c(&d.add(&nil)), c(&d), c(&nil))
}

/// A q-monomial with small unit, any root of unity and `|half| <= 2`.
pub fn qmonomial<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams) -> QMonomial {
    let units: Vec<i64> = (1..=7).filter(|u| (*u as u64) % params.ell != 0).collect();
    let num = *units.choose(rng).unwrap();
    let den = *units.choose(rng).unwrap();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let a = rng.gen_range(0..params.level as i64);
    let half = rng.gen_range(-2..=2);
    canonicalize_qmonomial(&rat(sign * num, den), a, half, params).expect("nonzero")
}

/// A q-monomial of weight exactly `w`: `zeta^a * q^{w/2}` up to sign.
pub fn weil_qmonomial<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, w: i64) -> QMonomial {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let a = rng.gen_range(0..params.level as i64);
    canonicalize_qmonomial(&rat(sign, 1), a, w * params.f as i64, params).expect("nonzero")
}

/// Residue data with room for small dihedral factors:
/// `q = 2` at level 3, `q = 3` at level 4, `q = 5` at level 12.
pub fn block_params(q: u64) -> ResidueParams {
    let level = match q {
        2 => 3,
        3 => 4,
        _ => 12,
    };
    ResidueParams::new(q, 1, level).expect("prime q")
}

/// An absolutely irreducible finite part with one inertia generator.
/// Dimension 2 pieces are induced from a character of order `m >= 3` with
/// `q = -1 mod m`; dimension 1 pieces are characters with `zeta^{q-1} = 1`.
pub fn finite_part<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, dim: usize) -> (Vec<Matrix<GroundScalar>>, Matrix<GroundScalar>) {
    let field = GroundField::new(params);
    let n = params.level as u64;
    if dim == 1 {
        let orders: Vec<u64> = (1..=n).filter(|m| n % m == 0 && (params.q - 1) % m == 0).collect();
        let m = *orders.choose(rng).unwrap();
        let a = rng.gen_range(0..m) * (n / m);
        return (vec![Matrix::scalar(&GroundScalar::zeta(&field, a as i64), 1)], Matrix::identity(&field, 1));
    }
    let orders: Vec<u64> = (3..=n).filter(|m| n % m == 0 && (params.q + 1) % m == 0).collect();
    let m = *orders.choose(rng).expect("a dihedral order exists at this level");
    let units: Vec<u64> = (1..m).filter(|a| num_integer::gcd(*a, m) == 1).collect();
    let a = (*units.choose(rng).unwrap() * (n / m)) as i64;
    let z = GroundScalar::zeta(&field, a);
    let zero = GroundScalar::zero(&field);
    let one = GroundScalar::one(&field);
    let sigma = Matrix::from_rows(&field, vec![vec![z.clone(), zero.clone()], vec![zero.clone(), z.inv().unwrap()]]).unwrap();
    let swap = Matrix::from_rows(&field, vec![vec![zero.clone(), one.clone()], vec![one, zero]]).unwrap();
    (vec![sigma], swap)
}

pub fn block<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, max_t: usize, max_dim: usize) -> GroundBlock {
    let dim = rng.gen_range(1..=max_dim);
    let (inertia, phi0) = finite_part(rng, params, dim);
    SpBlock {
        t: rng.gen_range(1..=max_t),
        rep: IrredRep {
            twist: qmonomial(rng, params),
            inertia,
            phi0,
        },
    }
}

/// Up to `max_blocks` blocks with `t <= max_t` and factor dimension
/// `<= max_dim`, one inertia generator.
pub fn structured<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, max_blocks: usize, max_t: usize, max_dim: usize) -> StructuredWD {
    let k = rng.gen_range(1..=max_blocks);
    let blocks = (0..k).map(|_| block(rng, params, max_t, max_dim)).collect();
    StructuredRep::new(*params, 1, blocks).expect("blocks share one inertia generator")
}

/// The matrix form of a random structured representation, conjugated by a
/// random unimodular matrix.
pub fn matrix_wd<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, max_blocks: usize, max_t: usize, max_dim: usize) -> MatrixWD {
    let s = structured(rng, params, max_blocks, max_t, max_dim);
    conjugate(rng, &s.to_matrix().expect("realizable"))
}

pub fn conjugate<R: Rng + ?Sized>(rng: &mut R, v: &MatrixWD) -> MatrixWD {
    let p = Matrix::random_unimodular(v.ctx(), v.dim(), rng);
    v.change_basis(&p).expect("unimodular")
}

/// Unipotent Frobenius perturbation `Phi (1 + eps N)` keeps every relation
/// and makes Frobenius non-semisimple when `N != 0`.
pub fn non_semisimple<R: Rng + ?Sized>(rng: &mut R, v: &MatrixWD) -> MatrixWD {
    let eps = GroundScalar::from_int(v.ctx(), rng.gen_range(1..=3));
    let u = Matrix::identity(v.ctx(), v.dim()).add(&v.monodromy.scale(&eps));
    WdRep::new(v.params, v.inertia.clone(), v.frobenius.mul(&u), v.monodromy.clone())
}

/// Shifts `c` used by [`family_factor`]; pass them as recovery hints.
pub const FAMILY_SHIFTS: [i64; 3] = [0, 1, -1];

/// `u (T - c)` with `u` in `{1, -1, 2, 1/3}` and `c` in [`FAMILY_SHIFTS`];
/// returns the factor with `(u, c)`.
pub fn family_factor<R: Rng + ?Sized>(rng: &mut R, field: &GroundField) -> (RatFunc, Rational, i64) {
    let u = [rat(1, 1), rat(-1, 1), rat(2, 1), rat(1, 3)].choose(rng).unwrap().clone();
    let c = *FAMILY_SHIFTS.choose(rng).unwrap();
    let shift = RatFunc::t(field).sub(&RatFunc::from_int(field, c));
    (shift.mul(&RatFunc::from_rational(field, &u)), u, c)
}

pub fn family_block<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, max_t: usize, max_dim: usize) -> FamilyBlock {
    let field = GroundField::new(params);
    let dim = rng.gen_range(1..=max_dim);
    let (inertia, phi0) = finite_part(rng, params, dim);
    SpBlock {
        t: rng.gen_range(1..=max_t),
        rep: IrredRep {
            twist: FamilyTwist::new(family_factor(rng, &field).0, qmonomial(rng, params)),
            inertia,
            phi0,
        },
    }
}

/// A structured family whose characters are `u (T - c)` times a q-monomial.
pub fn structured_family<R: Rng + ?Sized>(rng: &mut R, params: &ResidueParams, max_blocks: usize, max_t: usize, max_dim: usize) -> StructuredFamilyWD {
    let k = rng.gen_range(1..=max_blocks);
    let blocks = (0..k).map(|_| family_block(rng, params, max_t, max_dim)).collect();
    StructuredRep::new(*params, 1, blocks).expect("blocks share one inertia generator")
}

pub fn conjugate_family<R: Rng + ?Sized>(rng: &mut R, v: &FamilyWD) -> FamilyWD {
    let p = Matrix::random_unimodular(v.ctx(), v.dim(), rng);
    v.change_basis(&p).expect("unimodular")
}

/// A random document of any kind, over `q` in `{2, 3, 5}`.
pub fn document<R: Rng + ?Sized>(rng: &mut R) -> crate::io::Object {
    use crate::io::{report, Object};
    let params = block_params(*[2u64, 3, 5].choose(rng).unwrap());
    match rng.gen_range(0..7) {
        0 => Object::Matrix(matrix_wd(rng, &params, 2, 2, 2)),
        1 => Object::Structured(structured(rng, &params, 3, 3, 2)),
        2 => Object::StructuredFamily(structured_family(rng, &params, 2, 2, 2)),
        3 => {
            let f = structured_family(rng, &params, 2, 2, 2).to_matrix().expect("realizable");
            Object::Family(conjugate_family(rng, &f))
        }
        4 => {
            let parts = (0..rng.gen_range(1..=2)).map(|_| matrix_wd(rng, &params, 1, 2, 2)).collect();
            Object::Pseudo(crate::pseudo::PseudoRep::sum(parts).expect("same inertia count"))
        }
        5 => {
            let f = structured_family(rng, &params, 1, 2, 1).to_matrix().expect("realizable");
            Object::PseudoFamily(crate::pseudo::PseudoRep::stored(f))
        }
        _ => {
            let x = ground_scalar(rng, &GroundField::new(&params), 5);
            report(&params, "euler", rng.gen_range(0..4), serde_json::json!({ "value": x.to_string() }))
        }
    }
}
