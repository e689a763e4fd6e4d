//! Dense exact linear algebra: echelon forms, subspaces, characteristic and
//! minimal polynomials, Jordan-Chevalley decomposition, nilpotent Jordan
//! types and finite matrix group enumeration.

mod matrix;
mod subspace;

pub use matrix::Matrix;
pub use subspace::Subspace;

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::scalars::{Field, Poly};

/// Default element bound for [`group_closure`].
pub const DEFAULT_CAP: usize = 10_000;

pub fn kernel<F: Field>(a: &Matrix<F>) -> Subspace<F> {
    a.kernel()
}

pub fn image<F: Field>(a: &Matrix<F>) -> Subspace<F> {
    a.image()
}

pub fn intersect<F: Field>(u: &Subspace<F>, w: &Subspace<F>) -> Result<Subspace<F>> {
    u.intersect(w)
}

pub fn sum<F: Field>(u: &Subspace<F>, w: &Subspace<F>) -> Result<Subspace<F>> {
    u.sum(w)
}

/// Characteristic polynomial `det(X - A)` via reduction to Hessenberg form.
pub fn charpoly<F: Field>(a: &Matrix<F>) -> Result<Poly<F>> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    let ctx = a.ctx().clone();
    let n = a.rows();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
            continue;
        };
        if p != j + 1 {
            let q = j + 1;
            for c in 0..n {
                let (x, y) = (h.get(p, c).clone(), h.get(q, c).clone());
                h.set(p, c, y);
                h.set(q, c, x);
            }
            for r in 0..n {
                let (x, y) = (h.get(r, p).clone(), h.get(r, q).clone());
                h.set(r, p, y);
                h.set(r, q, x);
            }
        }
        let piv_inv = h.get(j + 1, j).inv().unwrap();
        for k in j + 2..n {
            let u = h.get(k, j).mul(&piv_inv);
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = h.get(k, c).sub(&u.mul(h.get(j + 1, c)));
                h.set(k, c, v);
            }
            for r in 0..n {
                let v = h.get(r, j + 1).add(&u.mul(h.get(r, k)));
                h.set(r, j + 1, v);
            }
        }
    }
    let x = Poly::x(&ctx);
    let mut p: Vec<Poly<F>> = vec![Poly::one(&ctx)];
    for m in 1..=n {
        let mut pm = x
            .sub(&Poly::constant(h.get(m - 1, m - 1).clone()))
            .mul(&p[m - 1]);
        let mut t = F::one(&ctx);
        for i in (1..m).rev() {
            t = t.mul(h.get(i, i - 1));
            if t.is_zero() {
                break;
            }
            let c = t.mul(h.get(i - 1, m - 1));
            pm = pm.sub(&p[i - 1].scale(&c));
        }
        p.push(pm);
    }
    Ok(p.pop().unwrap())
}

/// Minimal polynomial from the first linear dependence among `I, A, A^2, ...`.
pub fn minpoly<F: Field>(a: &Matrix<F>) -> Result<Poly<F>> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    let ctx = a.ctx().clone();
    let n = a.rows();
    let mut powers: Vec<Vec<F>> = Vec::new();
    let mut cur = Matrix::identity(&ctx, n);
    loop {
        powers.push(cur.entries().to_vec());
        // columns are the flattened powers; a kernel vector of the last prefix gives the relation
        let k = powers.len();
        let m = Matrix::from_fn(&ctx, n * n, k, |i, j| powers[j][i].clone());
        let ker = m.kernel();
        if let Some(v) = ker.basis().first() {
            return Ok(Poly::new(&ctx, v.clone()).monic());
        }
        cur = cur.mul(a);
    }
}

pub fn squarefree_part<F: Field>(p: &Poly<F>) -> Poly<F> {
    p.squarefree_part()
}

/// Multiplicative Jordan-Chevalley decomposition `A = S U = U S`.
///
/// The semisimple part is the limit of the Newton iteration
/// `x <- x - g(x) h(x)`, with `g` the squarefree part of the characteristic
/// polynomial and `h g' = 1 mod g`; it converges after `ceil(log2 n)` steps
/// and never leaves the field of definition.
pub fn jordan_chevalley<F: Field>(a: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    let cp = charpoly(a)?;
    if cp.coeff(0).is_zero() {
        return Err(Error::Singular);
    }
    let g = cp.squarefree_part();
    let mut x = a.clone();
    let mut gx = x.eval_poly(&g);
    if !gx.is_zero() {
        let (one, h, _) = g.derivative().ext_gcd(&g);
        debug_assert_eq!(one.degree(), Some(0));
        while !gx.is_zero() {
            x = x.sub(&gx.mul(&x.eval_poly(&h)));
            gx = x.eval_poly(&g);
        }
    }
    let u = x.inverse()?.mul(a);
    Ok((x, u))
}

/// Jordan block sizes of a nilpotent matrix, in descending order.
pub fn nilpotent_partition<F: Field>(n_mat: &Matrix<F>) -> Result<Vec<usize>> {
    if !n_mat.is_square() {
        return Err(Error::NotSquare);
    }
    let n = n_mat.rows();
    let ranks = rank_sequence(n_mat)?;
    // number of blocks of size >= k is rank(N^{k-1}) - rank(N^k)
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let ge_k = ranks[k - 1] - ranks[k];
        let ge_k1 = if k < n { ranks[k] - ranks[k + 1] } else { 0 };
        for _ in 0..ge_k - ge_k1 {
            parts.push(k);
        }
    }
    Ok(parts)
}

/// `rank(N^k)` for `k = 0..=n+1`; errors unless `N^n = 0`.
pub fn rank_sequence<F: Field>(n_mat: &Matrix<F>) -> Result<Vec<usize>> {
    let n = n_mat.rows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n_mat.ctx(), n);
    for _ in 0..n {
        p = p.mul(n_mat);
        ranks.push(p.rank());
    }
    if ranks[n] != 0 {
        return Err(Error::NotNilpotent);
    }
    ranks.push(0);
    Ok(ranks)
}

pub fn is_nilpotent<F: Field>(n_mat: &Matrix<F>) -> bool {
    n_mat.is_square() && n_mat.pow(n_mat.rows() as i64).is_ok_and(|m| m.is_zero())
}

/// All elements of the group generated by `gens`, identity first.
pub fn group_closure<F: Field>(ctx: &F::Ctx, n: usize, gens: &[Matrix<F>], cap: usize) -> Result<Vec<Matrix<F>>> {
    for g in gens {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch("generator of the wrong size".into()));
        }
    }
    let id = Matrix::identity(ctx, n);
    let mut seen: HashSet<Matrix<F>> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                if out.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Basis of `{X : X A = A X for all A in gens}`.
pub fn commutant<F: Field>(ctx: &F::Ctx, n: usize, gens: &[Matrix<F>]) -> Vec<Matrix<F>> {
    if gens.is_empty() {
        return (0..n * n)
            .map(|k| Matrix::unit(ctx, n, k / n + 1, k % n + 1))
            .collect();
    }
    // unknown x_{ij} at index i*n + j; equation (XA - AX)_{rc} = 0
    let mut rows: Vec<Vec<F>> = Vec::new();
    for a in gens {
        for r in 0..n {
            for c in 0..n {
                let mut eq = vec![F::zero(ctx); n * n];
                for k in 0..n {
                    // (XA)_{rc} = sum_k x_{rk} a_{kc}
                    let v = a.get(k, c);
                    if !v.is_zero() {
                        eq[r * n + k] = eq[r * n + k].add(v);
                    }
                    // (AX)_{rc} = sum_k a_{rk} x_{kc}
                    let w = a.get(r, k);
                    if !w.is_zero() {
                        eq[k * n + c] = eq[k * n + c].sub(w);
                    }
                }
                rows.push(eq);
            }
        }
    }
    let m = Matrix::from_rows(ctx, rows).unwrap();
    m.kernel()
        .basis()
        .iter()
        .map(|v| Matrix::new(ctx, n, n, v.clone()).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{GroundField, GroundScalar, ResidueParams};

    fn k() -> GroundField {
        GroundField::new(&ResidueParams::new(3, 1, 1).unwrap())
    }

    fn m(rows: &[&[i64]]) -> Matrix<GroundScalar> {
        let k = k();
        Matrix::from_rows(
            &k,
            rows.iter()
                .map(|r| r.iter().map(|&x| GroundScalar::from_int(&k, x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn e(n: usize, i: usize) -> Vec<GroundScalar> {
        let k = k();
        (0..n)
            .map(|j| GroundScalar::from_int(&k, (j == i) as i64))
            .collect()
    }

    fn jordan3() -> Matrix<GroundScalar> {
        // N e_i = e_{i+1}
        m(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn subspace_examples() {
        let k = k();
        let n = jordan3();
        assert_eq!(kernel(&n), Subspace::from_vectors(&k, 3, vec![e(3, 2)]));
        let u = Subspace::from_vectors(&k, 3, vec![e(3, 0), e(3, 1)]);
        let w = Subspace::from_vectors(&k, 3, vec![e(3, 1), e(3, 2)]);
        assert_eq!(intersect(&u, &w).unwrap(), Subspace::from_vectors(&k, 3, vec![e(3, 1)]));
        assert_eq!(sum(&u, &w).unwrap().dim(), 3);
        assert_eq!(image(&n.mul(&n)), Subspace::from_vectors(&k, 3, vec![e(3, 2)]));
        assert!(intersect(&u, &Subspace::zero(4)).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let k = k();
        let p = charpoly(&m(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(p.to_string(), "6 - 5*X + X^2");
        assert_eq!(minpoly(&jordan3()).unwrap(), Poly::monomial(GroundScalar::one(&k), 3));
        assert_eq!(minpoly(&m(&[&[2, 0], &[0, 2]])).unwrap().to_string(), "-2 + X");
        assert_eq!(charpoly(&m(&[&[1, 2], &[3, 4]])).unwrap().to_string(), "-2 - 5*X + X^2");
    }

    #[test]
    fn jordan_chevalley_examples() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let (s, u) = jordan_chevalley(&a).unwrap();
        assert!(s.is_identity());
        assert_eq!(u, a);

        let r = m(&[&[0, 1], &[-1, 0]]);
        let (s, u) = jordan_chevalley(&r).unwrap();
        assert_eq!(s, r);
        assert!(u.is_identity());

        let b = m(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]);
        let (s, u) = jordan_chevalley(&b).unwrap();
        assert_eq!(s, m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]));
        assert_eq!(s.mul(&u), b);
        assert!(s.commutes_with(&u));

        assert_eq!(jordan_chevalley(&m(&[&[0, 1], &[0, 0]])), Err(Error::Singular));
    }

    #[test]
    fn partition_examples() {
        assert_eq!(nilpotent_partition(&jordan3()).unwrap(), vec![3]);
        assert_eq!(nilpotent_partition(&Matrix::<GroundScalar>::zero(&k(), 4, 4)).unwrap(), vec![1, 1, 1, 1]);
        let n = m(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(nilpotent_partition(&n).unwrap(), vec![2, 1]);
        assert_eq!(nilpotent_partition(&m(&[&[1]])), Err(Error::NotNilpotent));
    }

    #[test]
    fn closure_examples() {
        let k = k();
        assert_eq!(group_closure(&k, 2, &[m(&[&[-1, 0], &[0, 1]])], DEFAULT_CAP).unwrap().len(), 2);
        assert_eq!(group_closure(&k, 2, &[m(&[&[0, -1], &[1, -1]])], DEFAULT_CAP).unwrap().len(), 3);
        assert_eq!(
            group_closure(&k, 2, &[m(&[&[1, 1], &[0, 1]])], 100),
            Err(Error::CapExceeded(100))
        );
    }

    #[test]
    fn commutant_dimensions() {
        let k = k();
        assert_eq!(commutant(&k, 2, &[m(&[&[1, 0], &[0, 3]])]).len(), 2);
        assert_eq!(commutant(&k, 2, &[m(&[&[0, 1], &[1, 0]]), m(&[&[1, 0], &[0, -1]])]).len(), 1);
        assert_eq!(commutant(&k, 3, &[jordan3()]).len(), 3);
    }
}
