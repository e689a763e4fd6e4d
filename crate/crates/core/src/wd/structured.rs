use std::fmt;
use std::hash::Hash;

use super::WdRep;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::{Field, GroundField, GroundScalar, QMonomial, RatFunc, ResidueParams};

/// Value of an unramified character at `phi`, in a form that can be
/// realised as a scalar of the matrix field.
pub trait Twist: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    type F: Field<Ctx = GroundField>;

    fn value(&self, field: &GroundField) -> Result<Self::F>;
    fn times(&self, alpha: &QMonomial) -> Self;
    fn pow(&self, k: i64) -> Self;
    fn embed(x: &GroundScalar) -> Self::F;
    /// A total order used to pick canonical representatives.
    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering;
}

impl Twist for QMonomial {
    type F = GroundScalar;

    fn value(&self, field: &GroundField) -> Result<GroundScalar> {
        self.to_scalar(field)
            .ok_or_else(|| Error::Unrepresentable(format!("{self} needs sqrt(ell), absent at level {}", field.level())))
    }

    fn times(&self, alpha: &QMonomial) -> Self {
        self.mul(alpha)
    }

    fn pow(&self, k: i64) -> Self {
        QMonomial::pow(self, k)
    }

    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp(other)
    }

    fn embed(x: &GroundScalar) -> GroundScalar {
        x.clone()
    }
}

/// `factor(T) * constant`, a character of the family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyTwist {
    pub factor: RatFunc,
    pub constant: QMonomial,
}

impl FamilyTwist {
    pub fn new(factor: RatFunc, constant: QMonomial) -> Self {
        FamilyTwist { factor, constant }
    }

    /// The constant character `alpha`.
    pub fn constant(field: &GroundField, alpha: QMonomial) -> Self {
        FamilyTwist {
            factor: RatFunc::one(field),
            constant: alpha,
        }
    }
}

impl fmt::Display for FamilyTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant.is_one() {
            write!(f, "{}", self.factor)
        } else {
            write!(f, "({})*[{}]", self.factor, self.constant)
        }
    }
}

impl Twist for FamilyTwist {
    type F = RatFunc;

    fn value(&self, field: &GroundField) -> Result<RatFunc> {
        let c = self.constant.value(field)?;
        Ok(self.factor.mul(&RatFunc::constant(c)))
    }

    fn times(&self, alpha: &QMonomial) -> Self {
        FamilyTwist {
            factor: self.factor.clone(),
            constant: self.constant.mul(alpha),
        }
    }

    fn pow(&self, k: i64) -> Self {
        FamilyTwist {
            factor: self.factor.pow(k).expect("character values are nonzero"),
            constant: self.constant.pow(k),
        }
    }

    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.constant, self.factor.to_string()).cmp(&(&other.constant, other.factor.to_string()))
    }

    fn embed(x: &GroundScalar) -> RatFunc {
        RatFunc::constant(x.clone())
    }
}

/// `chi (x) rho`: an unramified twist of a finite-image representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IrredRep<Tw: Twist> {
    pub twist: Tw,
    pub inertia: Vec<Matrix<GroundScalar>>,
    pub phi0: Matrix<GroundScalar>,
}

impl<Tw: Twist> IrredRep<Tw> {
    pub fn dim(&self) -> usize {
        self.phi0.rows()
    }

    /// The finite part alone, as a representation with trivial monodromy.
    pub fn finite_rep(&self, params: ResidueParams) -> WdRep<GroundScalar> {
        let n = self.dim();
        let ctx = self.phi0.ctx().clone();
        WdRep::new(params, self.inertia.clone(), self.phi0.clone(), Matrix::zero(&ctx, n, n))
    }

    /// `true` iff the finite group generated by the finite part is finite
    /// (within `cap`) and its commutant is the scalars.
    pub fn check(&self, cap: usize) -> Result<bool> {
        let n = self.dim();
        let ctx = self.phi0.ctx();
        let mut gens = self.inertia.clone();
        gens.push(self.phi0.clone());
        linalg::group_closure(ctx, n, &gens, cap)?;
        Ok(linalg::commutant(ctx, n, &gens).len() == 1)
    }
}

/// `Sp_t(rep)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpBlock<Tw: Twist> {
    pub t: usize,
    pub rep: IrredRep<Tw>,
}

/// A sum of `Sp_t` blocks; block order carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredRep<Tw: Twist> {
    pub params: ResidueParams,
    pub n_inertia: usize,
    pub blocks: Vec<SpBlock<Tw>>,
}

pub type StructuredWD = StructuredRep<QMonomial>;
pub type StructuredFamilyWD = StructuredRep<FamilyTwist>;
pub type GroundBlock = SpBlock<QMonomial>;
pub type FamilyBlock = SpBlock<FamilyTwist>;

impl<Tw: Twist> SpBlock<Tw> {
    pub fn dim(&self) -> usize {
        self.t * self.rep.dim()
    }

    /// `chi(phi) * q^{-(t-1)/2}`, the Frobenius class at the centre of the block.
    pub fn central_twist(&self, params: &ResidueParams) -> Tw {
        let shift = QMonomial {
            half: -(self.t as i64 - 1) * params.f as i64,
            unit: num_traits::One::one(),
            zeta: 0,
            sign: 1,
            level: params.level,
        };
        self.rep.twist.times(&shift)
    }
}

/// Matrix realisation of `Sp_t(chi (x) rho)`.
///
/// Copies are ordered most-twisted first: the `d`-dimensional block `b`
/// carries the copy `i = t-1-b`, on which Frobenius acts by
/// `chi(phi) q^{-i} phi0`; monodromy sends copy `i` identically to copy
/// `i+1`, so its kernel is the first block.
pub fn sp_to_matrix<Tw: Twist>(b: &SpBlock<Tw>, params: &ResidueParams) -> Result<WdRep<Tw::F>> {
    if b.t == 0 {
        return Err(Error::InvalidDatum("Sp_t needs t >= 1".into()));
    }
    let field = GroundField::new(params);
    let d = b.rep.dim();
    let t = b.t;
    let n = d * t;
    let chi = b.rep.twist.value(&field)?;
    let embed = |m: &Matrix<GroundScalar>| m.map(&field, Tw::embed);
    let phi0 = embed(&b.rep.phi0);
    let mut phi = Matrix::zero(&field, n, n);
    let mut nmat = Matrix::zero(&field, n, n);
    let one = <Tw::F as Field>::one(&field);
    for blk in 0..t {
        let i = (t - 1 - blk) as i64;
        let c = chi.mul(&<Tw::F as Field>::q_power(&field, -i));
        for r in 0..d {
            for s in 0..d {
                phi.set(blk * d + r, blk * d + s, phi0.get(r, s).mul(&c));
            }
        }
        if blk > 0 {
            // copy i (block blk) -> copy i+1 (block blk-1)
            for r in 0..d {
                nmat.set((blk - 1) * d + r, blk * d + r, one.clone());
            }
        }
    }
    let inertia = b
        .rep
        .inertia
        .iter()
        .map(|g| {
            let ge = embed(g);
            Matrix::block_diag_all(&field, &vec![ge; t])
        })
        .collect();
    Ok(WdRep::new(*params, inertia, phi, nmat))
}

impl<Tw: Twist> StructuredRep<Tw> {
    pub fn new(params: ResidueParams, n_inertia: usize, blocks: Vec<SpBlock<Tw>>) -> Result<Self> {
        for b in &blocks {
            if b.rep.inertia.len() != n_inertia {
                return Err(Error::InvalidDatum(format!(
                    "block has {} inertia generators, expected {n_inertia}",
                    b.rep.inertia.len()
                )));
            }
            if b.t == 0 {
                return Err(Error::InvalidDatum("Sp_t needs t >= 1".into()));
            }
        }
        Ok(StructuredRep {
            params,
            n_inertia,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    pub fn to_matrix(&self) -> Result<WdRep<Tw::F>> {
        let field = GroundField::new(&self.params);
        let mut it = self.blocks.iter();
        let Some(first) = it.next() else {
            return Ok(WdRep::new(
                self.params,
                vec![Matrix::zero(&field, 0, 0); self.n_inertia],
                Matrix::zero(&field, 0, 0),
                Matrix::zero(&field, 0, 0),
            ));
        };
        let mut acc = sp_to_matrix(first, &self.params)?;
        for b in it {
            acc = acc.direct_sum(&sp_to_matrix(b, &self.params)?)?;
        }
        Ok(acc)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.params != o.params || self.n_inertia != o.n_inertia {
            return Err(Error::ParamsMismatch);
        }
        let mut blocks = self.blocks.clone();
        blocks.extend(o.blocks.iter().cloned());
        Ok(StructuredRep { blocks, ..self.clone() })
    }

    pub fn twist_unramified(&self, alpha: &QMonomial) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| SpBlock {
                t: b.t,
                rep: IrredRep {
                    twist: b.rep.twist.times(alpha),
                    ..b.rep.clone()
                },
            })
            .collect();
        StructuredRep { blocks, ..self.clone() }
    }

    /// Largest `t`.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.t).max().unwrap_or(0)
    }

    /// The multiset `{(dim rep_i, t_i)}`, sorted.
    pub fn automorphic_type(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.blocks.iter().map(|b| (b.rep.dim(), b.t)).collect();
        v.sort_unstable();
        v
    }
}

/// `Sp_t(chi)` for a one-dimensional unramified `chi` and no inertia.
pub fn unramified_block(params: &ResidueParams, n_inertia: usize, t: usize, chi: QMonomial) -> GroundBlock {
    let field = GroundField::new(params);
    SpBlock {
        t,
        rep: IrredRep {
            twist: chi,
            inertia: vec![Matrix::identity(&field, 1); n_inertia],
            phi0: Matrix::identity(&field, 1),
        },
    }
}
