use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subspace};
use crate::scalars::Field;

/// The monodromy (weight) filtration `M_k` of a nilpotent operator, stored on
/// the window `-n-1 <= k <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyFiltration<F: Field> {
    n: usize,
    steps: BTreeMap<i64, Subspace<F>>,
}

impl<F: Field> MonodromyFiltration<F> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `M_k`, with the stable values outside the stored window.
    pub fn step(&self, k: i64) -> &Subspace<F> {
        let n = self.n as i64;
        &self.steps[&k.clamp(-n - 1, n)]
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace<F>> {
        &self.steps
    }

    pub fn gr_dim(&self, k: i64) -> usize {
        self.step(k).dim() - self.step(k - 1).dim()
    }

    /// `(k, dim Gr_k)` for every nonzero graded piece.
    pub fn gr_dims(&self) -> Vec<(i64, usize)> {
        let n = self.n as i64;
        (-n..=n)
            .map(|k| (k, self.gr_dim(k)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Re-verify `N M_k <= M_{k-2}` and `N^k : Gr_k ~ Gr_{-k}`.
    pub fn check_axioms(&self, n_mat: &Matrix<F>) -> bool {
        let n = self.n as i64;
        let ctx = n_mat.ctx();
        for k in -n..=n {
            if !self.step(k - 1).is_subspace_of(self.step(k)) {
                return false;
            }
            let img = self.step(k).image_under(n_mat).unwrap();
            if !img.is_subspace_of(self.step(k - 2)) {
                return false;
            }
        }
        if self.step(n).dim() != self.n || !self.step(-n - 1).is_zero() {
            return false;
        }
        let mut nk = Matrix::identity(ctx, self.n);
        for k in 0..=n {
            if k > 0 {
                nk = nk.mul(n_mat);
            }
            if self.gr_dim(k) != self.gr_dim(-k) {
                return false;
            }
            // surjectivity onto Gr_{-k} plus equal dimensions gives the isomorphism
            let img = self.step(k).image_under(&nk).unwrap();
            let hit = img.sum(self.step(-k - 1)).unwrap();
            if hit != *self.step(-k) {
                return false;
            }
        }
        true
    }
}

/// `M_k = sum_{j >= max(0,k)} ker(N^{j+1}) /\ im(N^{j-k})`.
pub fn monodromy_filtration<F: Field>(n_mat: &Matrix<F>) -> Result<MonodromyFiltration<F>> {
    if !n_mat.is_square() {
        return Err(Error::NotSquare);
    }
    if !linalg::is_nilpotent(n_mat) {
        return Err(Error::NotNilpotent);
    }
    let ctx = n_mat.ctx();
    let n = n_mat.rows();
    let ni = n as i64;
    let mut kernels = Vec::with_capacity(n + 2);
    let mut images = Vec::with_capacity(2 * n + 2);
    let mut p = Matrix::identity(ctx, n);
    for j in 0..=2 * n + 1 {
        if j <= n + 1 {
            kernels.push(p.kernel());
        }
        images.push(p.image());
        p = p.mul(n_mat);
    }
    let ker = |j: usize| &kernels[j.min(n + 1)];
    let img = |j: usize| &images[j.min(2 * n + 1)];
    let mut steps = BTreeMap::new();
    for k in -ni - 1..=ni {
        let mut m = Subspace::zero(n);
        for j in k.max(0)..=ni {
            let a = ker((j + 1) as usize);
            let b = img((j - k) as usize);
            m = m.sum(&a.intersect(b)?)?;
        }
        steps.insert(k, m);
    }
    Ok(MonodromyFiltration { n, steps })
}
