use super::Matrix;
use crate::error::{Error, Result};
use crate::scalars::Field;

/// A subspace of `F^n` stored by its reduced row echelon basis.
///
/// Because the basis is canonical, `==` is equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn from_vectors(ctx: &F::Ctx, ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(ctx, vectors).expect("vectors of equal length");
        assert_eq!(m.cols(), ambient);
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ctx: &F::Ctx, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) })
                    .collect()
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.basis.iter().all(|b| o.contains(b))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ambient != o.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of F^{} and F^{}",
                self.ambient, o.ambient
            )));
        }
        Ok(())
    }

    fn ctx_of(&self, o: &Self) -> Option<F::Ctx> {
        self.basis
            .first()
            .or(o.basis.first())
            .map(|v| v[0].ctx().clone())
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let Some(ctx) = self.ctx_of(o) else {
            return Ok(Self::zero(self.ambient));
        };
        let vs = self.basis.iter().chain(&o.basis).cloned().collect();
        Ok(Self::from_vectors(&ctx, self.ambient, vs))
    }

    /// Intersection by the Zassenhaus algorithm.
    pub fn intersect(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let ctx = self.ctx_of(o).unwrap();
        let n = self.ambient;
        let mut rows = Vec::new();
        for b in &self.basis {
            let mut r = b.clone();
            r.extend(b.iter().cloned());
            rows.push(r);
        }
        for b in &o.basis {
            let mut r = b.clone();
            r.extend(std::iter::repeat_with(|| F::zero(&ctx)).take(n));
            rows.push(r);
        }
        let (m, piv) = Matrix::from_rows(&ctx, rows).unwrap().rref();
        let mut out = Vec::new();
        for (i, &p) in piv.iter().enumerate() {
            if p >= n {
                out.push(m.row(i)[n..].to_vec());
            }
        }
        Ok(Self::from_vectors(&ctx, n, out))
    }

    /// `A(self)`.
    pub fn image_under(&self, a: &Matrix<F>) -> Result<Self> {
        if a.cols() != self.ambient {
            return Err(Error::DimensionMismatch("matrix does not act on this space".into()));
        }
        let vs = self.basis.iter().map(|b| a.apply(b)).collect();
        Ok(Self::from_vectors(a.ctx(), a.rows(), vs))
    }

    pub fn is_invariant_under(&self, a: &Matrix<F>) -> bool {
        a.cols() == self.ambient && self.basis.iter().all(|b| self.contains(&a.apply(b)))
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn basis_matrix(&self, ctx: &F::Ctx) -> Matrix<F> {
        Matrix::from_fn(ctx, self.ambient, self.dim(), |i, j| self.basis[j][i].clone())
    }

    /// A complement spanned by standard basis vectors at non-pivot positions.
    pub fn standard_complement(&self, ctx: &F::Ctx) -> Self {
        let vs = (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| {
                (0..self.ambient)
                    .map(|j| if j == c { F::one(ctx) } else { F::zero(ctx) })
                    .collect()
            })
            .collect();
        Self::from_vectors(ctx, self.ambient, vs)
    }
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}: ", self.dim(), self.ambient)?;
        for b in &self.basis {
            let s: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", s.join(", "))?;
        }
        write!(f, ")")
    }
}
