use std::collections::HashSet;

use serde::Serialize;

use super::{Letter, WeilWord};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subspace};
use crate::scalars::{Field, GroundScalar, Poly, RatFunc, ResidueParams};

/// A Weil-Deligne datum `(inertia generators, Frobenius lift, monodromy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdRep<F: Field> {
    pub params: ResidueParams,
    pub inertia: Vec<Matrix<F>>,
    pub frobenius: Matrix<F>,
    pub monodromy: Matrix<F>,
}

/// A representation over the ground field.
pub type MatrixWD = WdRep<GroundScalar>;
/// A representation over the rational function field in `T`.
pub type FamilyWD = WdRep<RatFunc>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-invariant outcome of [`WdRep::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

impl std::fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{mark} {}", c.name)?;
            } else {
                writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

impl<F: Field<Ctx = crate::scalars::GroundField>> WdRep<F> {
    pub fn new(params: ResidueParams, inertia: Vec<Matrix<F>>, frobenius: Matrix<F>, monodromy: Matrix<F>) -> Self {
        WdRep {
            params,
            inertia,
            frobenius,
            monodromy,
        }
    }

    pub fn dim(&self) -> usize {
        self.frobenius.rows()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.frobenius.ctx()
    }

    pub fn validate(&self) -> Diagnostics {
        self.validate_with_cap(linalg::DEFAULT_CAP)
    }

    pub fn validate_with_cap(&self, cap: usize) -> Diagnostics {
        let mut d = Diagnostics { checks: Vec::new() };
        let n = self.dim();
        let shapes_ok = self.frobenius.is_square()
            && self.monodromy.rows() == n
            && self.monodromy.cols() == n
            && self.inertia.iter().all(|g| g.rows() == n && g.cols() == n);
        d.push("shapes", shapes_ok, if shapes_ok { String::new() } else { "all matrices must be n x n".into() });
        if !shapes_ok {
            return d;
        }
        let phi_inv = self.frobenius.inverse();
        d.push("frobenius_invertible", phi_inv.is_ok(), "");
        let inert_inv_ok = self.inertia.iter().all(|g| g.inverse().is_ok());
        d.push("inertia_invertible", inert_inv_ok, "");

        let closure = if inert_inv_ok {
            linalg::group_closure(self.ctx(), n, &self.inertia, cap)
        } else {
            Err(Error::Singular)
        };
        match &closure {
            Ok(g) => d.push("inertia_finite", true, format!("closure of order {}", g.len())),
            Err(e) => d.push("inertia_finite", false, e.to_string()),
        }

        let nil = linalg::is_nilpotent(&self.monodromy);
        d.push("monodromy_nilpotent", nil, "");

        // Phi N Phi^{-1} = q^{-1} N, checked as q Phi N = N Phi
        let q = F::from_int(self.ctx(), self.params.q as i64);
        let rel = self.frobenius.mul(&self.monodromy).scale(&q) == self.monodromy.mul(&self.frobenius);
        d.push("frobenius_relation", rel, if rel { "" } else { "Phi N Phi^-1 != q^-1 N" });

        let bad: Vec<usize> = (0..self.inertia.len())
            .filter(|&j| !self.inertia[j].commutes_with(&self.monodromy))
            .collect();
        d.push(
            "inertia_commutes_with_monodromy",
            bad.is_empty(),
            if bad.is_empty() { String::new() } else { format!("generators {bad:?}") },
        );

        match (&closure, &phi_inv) {
            (Ok(g), Ok(pi)) => {
                let set: HashSet<&Matrix<F>> = g.iter().collect();
                let bad: Vec<usize> = (0..self.inertia.len())
                    .filter(|&j| !set.contains(&self.frobenius.mul(&self.inertia[j]).mul(pi)))
                    .collect();
                d.push(
                    "frobenius_normalizes_inertia",
                    bad.is_empty(),
                    if bad.is_empty() { String::new() } else { format!("generators {bad:?}") },
                );
            }
            _ => d.push("frobenius_normalizes_inertia", false, "not checkable"),
        }
        d
    }

    /// Validate and turn the first failure into an error.
    pub fn validated(self) -> Result<Self> {
        let d = self.validate();
        if d.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidDatum(
                d.failures()
                    .iter()
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
                    .join(", "),
            ))
        }
    }

    pub fn evaluate(&self, w: &WeilWord) -> Result<Matrix<F>> {
        let mut acc = Matrix::identity(self.ctx(), self.dim());
        for l in &w.letters {
            let m = match *l {
                Letter::Phi(k) => self.frobenius.pow(k)?,
                Letter::Inertia(j, k) => self
                    .inertia
                    .get(j)
                    .ok_or_else(|| Error::IndexOutOfRange(format!("inertia generator {j}")))?
                    .pow(k)?,
            };
            acc = acc.mul(&m);
        }
        Ok(acc)
    }

    pub fn trace(&self, w: &WeilWord) -> Result<F> {
        Ok(self.evaluate(w)?.trace())
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.params != o.params || self.inertia.len() != o.inertia.len() {
            return Err(Error::ParamsMismatch);
        }
        Ok(WdRep {
            params: self.params,
            inertia: self
                .inertia
                .iter()
                .zip(&o.inertia)
                .map(|(a, b)| Matrix::block_diag(a, b))
                .collect(),
            frobenius: Matrix::block_diag(&self.frobenius, &o.frobenius),
            monodromy: Matrix::block_diag(&self.monodromy, &o.monodromy),
        })
    }

    /// Twist by the unramified character sending `phi` to `alpha`.
    pub fn twist_unramified(&self, alpha: &F) -> Self {
        WdRep {
            frobenius: self.frobenius.scale(alpha),
            ..self.clone()
        }
    }

    /// Conjugate every matrix by `p`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self> {
        let pi = p.inverse()?;
        let c = |m: &Matrix<F>| p.mul(m).mul(&pi);
        Ok(WdRep {
            params: self.params,
            inertia: self.inertia.iter().map(c).collect(),
            frobenius: c(&self.frobenius),
            monodromy: c(&self.monodromy),
        })
    }

    /// Replace Frobenius by its semisimple Jordan-Chevalley factor.
    pub fn frobenius_semisimplify(&self) -> Result<Self> {
        let (s, _) = linalg::jordan_chevalley(&self.frobenius)?;
        Ok(WdRep {
            frobenius: s,
            ..self.clone()
        })
    }

    pub fn inertia_closure(&self, cap: usize) -> Result<Vec<Matrix<F>>> {
        linalg::group_closure(self.ctx(), self.dim(), &self.inertia, cap)
    }

    /// `V^{I}` via the averaging projector over the inertia image.
    pub fn inertia_invariants(&self, cap: usize) -> Result<Subspace<F>> {
        let n = self.dim();
        if self.inertia.is_empty() {
            return Ok(Subspace::full(self.ctx(), n));
        }
        let g = self.inertia_closure(cap)?;
        Ok(averaging_projector(self.ctx(), n, &g).image())
    }

    /// `det(1 - X Phi | V^{I, N=0})`, the inverse Euler factor.
    pub fn euler_factor(&self, cap: usize) -> Result<Poly<F>> {
        let inv = self.inertia_invariants(cap)?;
        let w = inv.intersect(&self.monodromy.kernel())?;
        if !w.is_invariant_under(&self.frobenius) {
            return Err(Error::InvalidDatum("V^{I,N=0} is not Frobenius-stable".into()));
        }
        if w.dim() == 0 {
            return Ok(Poly::one(self.ctx()));
        }
        let b = self.frobenius.restrict(&w)?;
        Ok(linalg::charpoly(&b)?.reversed())
    }

    /// Words in `phi^{+-1}` and the inertia generators whose images span the
    /// algebra generated by `self`.
    pub fn spanning_words(&self) -> Vec<WeilWord> {
        spanning_words(std::slice::from_ref(self))
    }
}

/// `(1/|G|) sum_{g in G} g`.
pub fn averaging_projector<F: Field>(ctx: &F::Ctx, n: usize, group: &[Matrix<F>]) -> Matrix<F> {
    let mut acc = Matrix::zero(ctx, n, n);
    for g in group {
        acc = acc.add(g);
    }
    let inv = F::from_int(ctx, group.len() as i64).inv().unwrap();
    acc.scale(&inv)
}

/// Words whose images span the algebra generated by each representation in
/// `reps` simultaneously (breadth-first products until the span of the
/// stacked images stops growing).
pub fn spanning_words<F: Field<Ctx = crate::scalars::GroundField>>(reps: &[WdRep<F>]) -> Vec<WeilWord> {
    let Some(first) = reps.first() else {
        return vec![WeilWord::empty()];
    };
    let ctx = first.ctx().clone();
    let mut gens: Vec<WeilWord> = vec![WeilWord::phi(1), WeilWord::phi(-1)];
    for j in 0..first.inertia.len() {
        gens.push(WeilWord::inertia(j, 1));
    }
    let gen_mats: Vec<Vec<Matrix<F>>> = gens
        .iter()
        .map(|g| reps.iter().map(|r| r.evaluate(g).unwrap()).collect())
        .collect();
    let flatten = |ms: &[Matrix<F>]| -> Vec<F> { ms.iter().flat_map(|m| m.entries().to_vec()).collect() };
    let ident: Vec<Matrix<F>> = reps.iter().map(|r| Matrix::identity(&ctx, r.dim())).collect();
    let total: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
    let mut words = vec![WeilWord::empty()];
    let mut basis_vecs = vec![flatten(&ident)];
    let mut span = Subspace::from_vectors(&ctx, total, basis_vecs.clone());
    let mut frontier = vec![(WeilWord::empty(), ident)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, ms) in &frontier {
            for (g, gm) in gens.iter().zip(&gen_mats) {
                let prod: Vec<Matrix<F>> = ms.iter().zip(gm).map(|(a, b)| a.mul(b)).collect();
                let v = flatten(&prod);
                if span.contains(&v) {
                    continue;
                }
                basis_vecs.push(v);
                span = Subspace::from_vectors(&ctx, total, basis_vecs.clone());
                let nw = w.concat(g);
                words.push(nw.clone());
                next.push((nw, prod));
            }
        }
        frontier = next;
    }
    words
}
