use std::fmt;
use std::hash::{Hash, Hasher};

use super::Subspace;
use crate::error::{Error, Result};
use crate::scalars::{Field, Poly, Rational};

/// Dense row-major matrix over a field.
#[derive(Clone)]
pub struct Matrix<F: Field> {
    ctx: F::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

impl<F: Field> Eq for Matrix<F> {}

impl<F: Field> Hash for Matrix<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(ctx: &F::Ctx, rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(ctx, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(ctx: &F::Ctx, rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zero(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| F::zero(ctx))
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        Self::scalar(&F::one(ctx), n)
    }

    pub fn scalar(c: &F, n: usize) -> Self {
        let ctx = c.ctx().clone();
        Self::from_fn(&ctx, n, n, |i, j| if i == j { c.clone() } else { F::zero(&ctx) })
    }

    pub fn diag(ctx: &F::Ctx, d: &[F]) -> Self {
        Self::from_fn(ctx, d.len(), d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                F::zero(ctx)
            }
        })
    }

    /// The matrix unit `E_{ij}` (1-based indices, as in the literature).
    pub fn unit(ctx: &F::Ctx, n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(ctx, n, n, |a, b| {
            if a + 1 == i && b + 1 == j {
                F::one(ctx)
            } else {
                F::zero(ctx)
            }
        })
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    fn check_same_shape(&self, o: &Self) {
        assert!(
            self.rows == o.rows && self.cols == o.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            o.rows,
            o.cols
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same_shape(o);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_same_shape(o);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|x| x.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map_entries(|x| x.mul(c))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&F::from_rational(&self.ctx, r))
    }

    pub fn map_entries(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Change of coefficient field entrywise.
    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> std::result::Result<G, E>) -> std::result::Result<Matrix<G>, E> {
        let data = self.data.iter().map(f).collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(Matrix {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimensions differ");
        let mut data = vec![F::zero(&self.ctx); self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        data[idx] = data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: o.cols,
            data,
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul(o))
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero(&self.ctx);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero(&self.ctx);
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).sub(&f.mul(rv));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one(&self.ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(F::zero(&self.ctx));
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let aug = Self::from_fn(&self.ctx, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one(&self.ctx)
            } else {
                F::zero(&self.ctx)
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(&self.ctx, n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(&self.ctx, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `P * self * P^{-1}`.
    pub fn conjugate_by(&self, p: &Self) -> Result<Self> {
        Ok(p.mul(self).mul(&p.inverse()?))
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        Self::from_fn(&a.ctx, r, c, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                F::zero(&a.ctx)
            }
        })
    }

    pub fn block_diag_all(ctx: &F::Ctx, blocks: &[Self]) -> Self {
        blocks
            .iter()
            .fold(Self::zero(ctx, 0, 0), |acc, b| Self::block_diag(&acc, b))
    }

    /// Null space of `self` acting on column vectors.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, piv) = self.rref();
        let n = self.cols;
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !piv.contains(c)) {
            let mut v = vec![F::zero(&self.ctx); n];
            v[free] = F::one(&self.ctx);
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        Subspace::from_vectors(&self.ctx, n, basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace<F> {
        let cols = (0..self.cols).map(|j| self.col(j)).collect();
        Subspace::from_vectors(&self.ctx, self.rows, cols)
    }

    /// The matrix of `self` on an invariant subspace in its echelon basis.
    pub fn restrict(&self, s: &Subspace<F>) -> Result<Self> {
        if s.ambient() != self.rows || !self.is_square() {
            return Err(Error::DimensionMismatch("restriction to a subspace of another space".into()));
        }
        let d = s.dim();
        let mut m = Self::zero(&self.ctx, d, d);
        for (j, b) in s.basis().iter().enumerate() {
            let img = self.apply(b);
            let coords = s
                .coordinates(&img)
                .ok_or_else(|| Error::DimensionMismatch("subspace is not invariant".into()))?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<F>) -> Self {
        let n = self.rows;
        let mut acc = Self::zero(&self.ctx, n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::scalar(c, n));
        }
        acc
    }

    /// A random integer matrix of determinant 1, built from `3n` elementary
    /// row operations with multipliers in `-2..=2`.
    pub fn random_unimodular<R: rand::Rng + ?Sized>(ctx: &F::Ctx, n: usize, rng: &mut R) -> Self {
        let mut m = Self::identity(ctx, n);
        if n < 2 {
            return m;
        }
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = F::from_int(ctx, rng.gen_range(-2..=2));
            for k in 0..n {
                let v = m.get(i, k).add(&c.mul(m.get(j, k)));
                m.set(i, k, v);
            }
        }
        m
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "Matrix[{}]", rows.join(", "))
    }
}
