//! Splitting a Frobenius-semisimple Weil group representation (trivial
//! monodromy) into absolutely irreducible pieces.

use std::collections::{HashMap, HashSet};

use super::roots::TwistField;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subspace};
use crate::scalars::{Field, GroundField, Rational, ResidueParams};
use crate::wd::{averaging_projector, Twist, WdRep};

/// An absolutely irreducible `chi (x) rho` found inside a representation.
#[derive(Debug, Clone)]
pub(crate) struct Piece<F: TwistField> {
    pub twist: F::Tw,
    pub inertia: Vec<Matrix<F>>,
    pub phi0: Matrix<F>,
}

impl<F: TwistField> Piece<F> {
    pub fn dim(&self) -> usize {
        self.phi0.rows()
    }

    /// The piece as a Weil-Deligne representation with `N = 0`.
    pub fn realized(&self, params: ResidueParams) -> Result<WdRep<F>> {
        let ctx = self.phi0.ctx().clone();
        let chi = self.twist.value(&ctx)?;
        let n = self.dim();
        Ok(WdRep::new(params, self.inertia.clone(), self.phi0.scale(&chi), Matrix::zero(&ctx, n, n)))
    }
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::EigenvaluesOutsideSupportedField(msg.into())
}

/// Roots of unity of the working field, in a fixed enumeration order.
fn roots_of_unity<F: Field<Ctx = GroundField>>(ctx: &GroundField) -> Vec<F> {
    let n = ctx.level() as i64;
    let mut out: Vec<F> = (0..n).map(|a| F::zeta(ctx, a)).collect();
    if n % 2 == 1 {
        out.extend((0..n).map(|a| F::zeta(ctx, a).neg()));
    }
    out
}

/// Eigenvalues of a finite-order matrix, as indices into `units`.
fn unit_eigenvalues<F: Field<Ctx = GroundField>>(h: &Matrix<F>, units: &[F]) -> Result<Vec<usize>> {
    let n = h.rows();
    let cp = linalg::charpoly(h)?;
    let ctx = h.ctx();
    let mut found = Vec::new();
    let mut total = 0;
    for (i, mu) in units.iter().enumerate() {
        if cp.eval(mu).is_zero() {
            total += h.sub(&Matrix::scalar(mu, n)).kernel().dim();
            found.push(i);
        }
    }
    if total != n {
        return Err(unsupported(format!(
            "a finite-order element has eigenvalues outside the field of level {}",
            ctx.level()
        )));
    }
    Ok(found)
}

fn combine<F: Field>(s: &Subspace<F>, coords: &[F]) -> Vec<F> {
    let ctx = coords[0].ctx();
    let mut v = vec![F::zero(ctx); s.ambient()];
    for (c, b) in coords.iter().zip(s.basis()) {
        for (x, y) in v.iter_mut().zip(b) {
            *x = x.add(&c.mul(y));
        }
    }
    v
}

/// A subspace given in coordinates of `outer`, moved to the ambient space.
fn lift_sub<F: Field>(ctx: &F::Ctx, outer: &Subspace<F>, inner: &Subspace<F>) -> Subspace<F> {
    let vs = inner.basis().iter().map(|c| combine(outer, c)).collect();
    Subspace::from_vectors(ctx, outer.ambient(), vs)
}

fn spin<F: Field>(ctx: &F::Ctx, gens: &[Matrix<F>], v: Vec<F>) -> Subspace<F> {
    let n = v.len();
    let mut vecs = vec![v];
    let mut s = Subspace::from_vectors(ctx, n, vecs.clone());
    let mut i = 0;
    while i < vecs.len() {
        for g in gens {
            let w = g.apply(&vecs[i]);
            if !s.contains(&w) {
                vecs.push(w);
                s = Subspace::from_vectors(ctx, n, vecs.clone());
            }
        }
        i += 1;
    }
    s
}

/// `P` restricted to `u`, split by its rational eigenvalues in `[0, 1]`.
fn split_by_central<F: Field>(ctx: &F::Ctx, p: &Matrix<F>, u: &Subspace<F>, max_den: usize) -> Result<Vec<Subspace<F>>> {
    let pm = p.restrict(u)?;
    let cp = linalg::charpoly(&pm)?;
    let mut seen: HashSet<Rational> = HashSet::new();
    let mut parts = Vec::new();
    let mut covered = 0;
    for b in 1..=max_den as i64 {
        for a in 0..=b {
            let lam = Rational::new(a.into(), b.into());
            if !seen.insert(lam.clone()) {
                continue;
            }
            let l = F::from_rational(ctx, &lam);
            if !cp.eval(&l).is_zero() {
                continue;
            }
            let k = pm.sub(&Matrix::scalar(&l, pm.rows())).kernel();
            covered += k.dim();
            parts.push(lift_sub(ctx, u, &k));
        }
    }
    if covered != u.dim() {
        return Err(unsupported("isotypic projector has eigenvalues outside the expected range"));
    }
    Ok(parts)
}

/// `H`-equivariant projection of `F^n` onto the `H`-stable `s`.
fn equivariant_projection<F: Field>(ctx: &F::Ctx, n: usize, s: &Subspace<F>, group: &[Matrix<F>], inverses: &[Matrix<F>]) -> Result<Matrix<F>> {
    let comp = s.standard_complement(ctx);
    let mut cols: Vec<Vec<F>> = s.basis().to_vec();
    cols.extend(comp.basis().iter().cloned());
    let b = Matrix::from_fn(ctx, n, n, |i, j| cols[j][i].clone());
    let d = Matrix::from_fn(ctx, n, n, |i, j| {
        if i == j && i < s.dim() {
            F::one(ctx)
        } else {
            F::zero(ctx)
        }
    });
    let pi0 = b.mul(&d).mul(&b.inverse()?);
    let conj: Vec<Matrix<F>> = group.iter().zip(inverses).map(|(g, gi)| g.mul(&pi0).mul(gi)).collect();
    Ok(averaging_projector(ctx, n, &conj))
}

/// Absolutely irreducible `H`-stable summands of `F^n`, `H` a finite group
/// given by all its elements.
fn split_finite<F: Field<Ctx = GroundField>>(ctx: &GroundField, n: usize, group: &[Matrix<F>], gens: &[Matrix<F>]) -> Result<Vec<Subspace<F>>> {
    let units: Vec<F> = roots_of_unity(ctx);
    let inverses: Vec<Matrix<F>> = group.iter().map(|g| g.inverse()).collect::<Result<_>>()?;
    let index: HashMap<&Matrix<F>, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let ord = F::from_int(ctx, group.len() as i64).inv().unwrap();

    // isotypic components: averaged eigenprojections are central and act on
    // each component by a rational scalar
    let mut pieces = vec![Subspace::full(ctx, n)];
    let mut done: HashSet<usize> = HashSet::new();
    let mut eig: Vec<Vec<usize>> = Vec::with_capacity(group.len());
    for h in group {
        eig.push(unit_eigenvalues(h, &units)?);
    }
    for (hi, h) in group.iter().enumerate() {
        if done.contains(&hi) {
            continue;
        }
        for (g, gi) in group.iter().zip(&inverses) {
            done.insert(index[&g.mul(h).mul(gi)]);
        }
        if eig[hi].len() < 2 {
            continue;
        }
        for &mi in &eig[hi] {
            let mu = &units[mi];
            let mut pi = Matrix::identity(ctx, n);
            for &ni in &eig[hi] {
                if ni == mi {
                    continue;
                }
                let nu = &units[ni];
                let c = mu.sub(nu).inv().unwrap();
                pi = pi.mul(&h.sub(&Matrix::scalar(nu, n))).scale(&c);
            }
            let mut acc = Matrix::zero(ctx, n, n);
            for (g, gi) in group.iter().zip(&inverses) {
                acc = acc.add(&g.mul(&pi).mul(gi));
            }
            let p = acc.scale(&ord);
            let mut next = Vec::new();
            for u in &pieces {
                next.extend(split_by_central(ctx, &p, u, n)?);
            }
            pieces = next;
        }
    }

    let mut out = Vec::new();
    for u in pieces {
        let rgens: Vec<Matrix<F>> = gens.iter().map(|g| g.restrict(&u)).collect::<Result<_>>()?;
        let c = linalg::commutant(ctx, u.dim(), &rgens).len();
        if c == 1 {
            out.push(u);
            continue;
        }
        let m = (1..=u.dim()).find(|m| m * m == c).ok_or_else(|| unsupported("constituent is not absolutely irreducible over the working field"))?;
        if u.dim() % m != 0 {
            return Err(unsupported("constituent is not absolutely irreducible over the working field"));
        }
        let s = u.dim() / m;
        // an element with an eigenvalue of multiplicity one on the constituent
        let mut choice = None;
        'search: for (hi, h) in group.iter().enumerate() {
            for &mi in &eig[hi] {
                let e = h.sub(&Matrix::scalar(&units[mi], n)).kernel().intersect(&u)?;
                if e.dim() == m {
                    choice = Some(e);
                    break 'search;
                }
            }
        }
        let e = choice.ok_or_else(|| unsupported("no element separates the copies of a constituent"))?;
        let mut rest = u.clone();
        for _ in 0..m {
            let cand = e.intersect(&rest)?;
            let v = cand.basis()[0].clone();
            let sub = spin(ctx, gens, v);
            if sub.dim() != s {
                return Err(unsupported("spun submodule has the wrong dimension"));
            }
            let proj = equivariant_projection(ctx, n, &sub, group, &inverses)?;
            rest = proj.kernel().intersect(&rest)?;
            out.push(sub);
        }
    }
    Ok(out)
}

/// Conjugate the generators into a basis determined by the representation
/// alone: spin an eigenvector for the first simple eigenvalue met in
/// closure order.
fn canonical_basis<F: Field<Ctx = GroundField>>(ctx: &GroundField, gens: &[Matrix<F>], cap: usize) -> Result<Vec<Matrix<F>>> {
    let n = gens[0].rows();
    if n == 1 {
        return Ok(gens.to_vec());
    }
    let units: Vec<F> = roots_of_unity(ctx);
    let group = linalg::group_closure(ctx, n, gens, cap)?;
    for h in &group {
        let order = unit_eigenvalues(h, &units)?;
        for mi in order {
            let k = h.sub(&Matrix::scalar(&units[mi], n)).kernel();
            if k.dim() != 1 {
                continue;
            }
            let v = k.basis()[0].clone();
            let mut cols: Vec<Vec<F>> = Vec::new();
            let mut span = Subspace::zero(n);
            for g in &group {
                let w = g.apply(&v);
                if !span.contains(&w) {
                    cols.push(w);
                    span = Subspace::from_vectors(ctx, n, cols.clone());
                    if cols.len() == n {
                        break;
                    }
                }
            }
            let b = Matrix::from_fn(ctx, n, n, |i, j| cols[j][i].clone());
            let bi = b.inverse()?;
            return Ok(gens.iter().map(|g| bi.mul(g).mul(&b)).collect());
        }
    }
    Ok(gens.to_vec())
}

/// Order of the permutation `g -> phi g phi^{-1}` of the inertia image.
fn conjugation_order<F: Field>(phi: &Matrix<F>, group: &[Matrix<F>]) -> Result<usize> {
    let pi = phi.inverse()?;
    let index: HashMap<&Matrix<F>, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let perm: Vec<usize> = group
        .iter()
        .map(|g| {
            index
                .get(&phi.mul(g).mul(&pi))
                .copied()
                .ok_or_else(|| Error::InvalidDatum("Frobenius does not normalize the inertia image".into()))
        })
        .collect::<Result<_>>()?;
    let mut ord = 1usize;
    let mut seen = vec![false; perm.len()];
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        ord = num_integer::lcm(ord, len);
    }
    Ok(ord)
}

/// Decompose the Weil group representation `(phi, inertia)` (semisimple
/// `phi`) into absolutely irreducible pieces with canonical bases.
pub(crate) fn decompose<F: TwistField>(
    phi: &Matrix<F>,
    inertia: &[Matrix<F>],
    hints: &[crate::scalars::GroundScalar],
    cap: usize,
) -> Result<Vec<Piece<F>>> {
    let n = phi.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ctx = phi.ctx().clone();
    let g = linalg::group_closure(&ctx, n, inertia, cap)?;
    let k = conjugation_order(phi, &g)? as i64;

    let cp = linalg::charpoly(phi)?;
    let roots = F::monomial_roots(&cp, hints);
    let mut eigen: Vec<(F::Tw, Subspace<F>)> = Vec::new();
    let mut total = 0;
    for r in roots {
        let v = r.value(&ctx)?;
        let e = phi.sub(&Matrix::scalar(&v, n)).kernel();
        total += e.dim();
        eigen.push((r, e));
    }
    if total != n {
        return Err(unsupported(format!(
            "characteristic polynomial {} of Frobenius has roots that are not of supported monomial form at level {}",
            cp,
            ctx.level()
        )));
    }

    // group eigenvalues with equal k-th powers
    let mut groups: Vec<(F, Vec<(F::Tw, Subspace<F>)>)> = Vec::new();
    for (r, e) in eigen {
        let key = r.pow(k).value(&ctx)?;
        match groups.iter_mut().find(|(kk, _)| *kk == key) {
            Some((_, v)) => v.push((r, e)),
            None => groups.push((key, vec![(r, e)])),
        }
    }

    let mut out = Vec::new();
    for (_, members) in groups {
        let alpha0 = members
            .iter()
            .map(|(r, _)| r.clone())
            .min_by(|a, b| a.canonical_cmp(b))
            .unwrap();
        let mut v = Subspace::zero(n);
        for (_, e) in &members {
            v = v.sum(e)?;
        }
        let a0 = alpha0.value(&ctx)?;
        let h0 = phi.restrict(&v)?.scale(&a0.inv().unwrap());
        let mut gens: Vec<Matrix<F>> = inertia.iter().map(|x| x.restrict(&v)).collect::<Result<_>>()?;
        gens.push(h0);
        let dv = v.dim();
        let group = linalg::group_closure(&ctx, dv, &gens, cap)?;
        for s in split_finite(&ctx, dv, &group, &gens)? {
            let rg: Vec<Matrix<F>> = gens.iter().map(|x| x.restrict(&s)).collect::<Result<_>>()?;
            let mut cb = canonical_basis(&ctx, &rg, cap)?;
            let phi0 = cb.pop().unwrap();
            out.push(Piece {
                twist: alpha0.clone(),
                inertia: cb,
                phi0,
            });
        }
    }
    Ok(out)
}
