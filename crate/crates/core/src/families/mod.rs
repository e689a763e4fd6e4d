//! One-parameter families over `F(T)`: specialization, the generic fibre,
//! and a per-point check of the purity theorem for families.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{Field, GroundScalar, Poly, QMonomial, RatFunc};
use crate::structure::{
    blocks_isomorphic, purity_verdict, qmonomial_roots, recover_structure, PurityVerdict, RecoveryOptions,
};
use crate::wd::{FamilyWD, IrredRep, MatrixWD, SpBlock, StructuredFamilyWD, StructuredWD, WdRep};

fn check_field(f: &FamilyWD, tau: &GroundScalar) -> Result<()> {
    if f.ctx() != tau.field() {
        return Err(Error::InvalidParams(format!(
            "point {tau} lives at level {} but the family at level {}",
            tau.field().level(),
            f.ctx().level()
        )));
    }
    Ok(())
}

fn eval_matrix(m: &Matrix<RatFunc>, tau: &GroundScalar) -> Result<Matrix<GroundScalar>> {
    m.try_map(tau.field(), |x| x.eval(tau))
}

/// The fibre at `T = tau`.
pub fn specialize(f: &FamilyWD, tau: &GroundScalar) -> Result<MatrixWD> {
    check_field(f, tau)?;
    let phi = eval_matrix(&f.frobenius, tau)?;
    if phi.det()?.is_zero() {
        return Err(Error::SingularFrobeniusAtPoint);
    }
    let inertia = f.inertia.iter().map(|g| eval_matrix(g, tau)).collect::<Result<_>>()?;
    Ok(WdRep::new(f.params, inertia, phi, eval_matrix(&f.monodromy, tau)?))
}

/// A nonzero ground scalar as a q-monomial, when it is one.
pub fn as_qmonomial(x: &GroundScalar) -> Option<QMonomial> {
    let p = Poly::linear_root(x);
    qmonomial_roots(&p).into_iter().next()
}

/// Blockwise specialization: every character is evaluated at `tau`.
pub fn specialize_structured(f: &StructuredFamilyWD, tau: &GroundScalar) -> Result<StructuredWD> {
    let mut blocks = Vec::with_capacity(f.blocks.len());
    for b in &f.blocks {
        let v = b.rep.twist.factor.eval(tau)?;
        if v.is_zero() {
            return Err(Error::VanishingCharacterAtPoint);
        }
        let m = as_qmonomial(&v).ok_or_else(|| Error::Unrepresentable(format!("character value {v} is not a q-monomial")))?;
        blocks.push(SpBlock {
            t: b.t,
            rep: IrredRep {
                twist: m.mul(&b.rep.twist.constant),
                inertia: b.rep.inertia.clone(),
                phi0: b.rep.phi0.clone(),
            },
        });
    }
    crate::wd::StructuredRep::new(f.params, f.n_inertia, blocks)
}

/// Generic inverse Euler factor.
pub fn generic_euler(f: &FamilyWD, cap: usize) -> Result<Poly<RatFunc>> {
    f.euler_factor(cap)
}

/// `true` iff every coefficient lies in the polynomial ring `F[T]`.
pub fn is_integral(p: &Poly<RatFunc>) -> bool {
    p.coeffs().iter().all(|c| c.is_polynomial())
}

pub fn eval_poly(p: &Poly<RatFunc>, tau: &GroundScalar) -> Result<Poly<GroundScalar>> {
    p.try_map(tau.field(), |c| c.eval(tau))
}

/// Structure of the generic fibre.
pub fn generic_structure(f: &FamilyWD, opts: &RecoveryOptions) -> Result<StructuredFamilyWD> {
    recover_structure(f, opts)
}

/// Ranks of `N^k` for `k = 1..=n`.
pub fn monodromy_ranks<F: Field>(n: &Matrix<F>) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.rows());
    let mut p = n.clone();
    for _ in 0..n.rows() {
        out.push(p.rank());
        p = p.mul(n);
    }
    out
}

/// Outcome at one specialization point.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub tau: GroundScalar,
    pub purity: PurityVerdict,
    /// Structure transfer; `None` at non-pure points.
    pub structure_transfer: Option<bool>,
    /// `(k, rank of N^k generically, rank at the fibre)`.
    pub ranks: Vec<(usize, usize, usize)>,
    pub rank_drop: bool,
    pub euler_interpolated: Poly<GroundScalar>,
    pub euler_fiber: Poly<GroundScalar>,
    pub automorphic_type: Vec<(usize, usize)>,
}

impl PointRecord {
    pub fn applicable(&self) -> bool {
        self.purity.pure
    }

    pub fn euler_matches(&self) -> bool {
        self.euler_interpolated == self.euler_fiber
    }

    /// Claims of the theorem that fail here (empty at non-pure points).
    pub fn violations(&self) -> Vec<String> {
        if !self.applicable() {
            return Vec::new();
        }
        let mut v = Vec::new();
        if self.structure_transfer != Some(true) {
            v.push(format!("structure transfer fails at {}", self.tau));
        }
        if self.rank_drop {
            v.push(format!("monodromy rank drops at pure point {}", self.tau));
        }
        if !self.euler_matches() {
            v.push(format!("Euler factor does not interpolate at {}", self.tau));
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct PurityTheoremReport {
    pub generic_euler: Poly<RatFunc>,
    pub euler_integral: bool,
    pub generic_ranks: Vec<usize>,
    pub points: Vec<PointRecord>,
    /// Equal automorphic types across all pure points.
    pub at_constant: bool,
}

impl PurityTheoremReport {
    pub fn violations(&self) -> Vec<String> {
        let mut v: Vec<String> = self.points.iter().flat_map(|p| p.violations()).collect();
        if !self.at_constant {
            v.push("automorphic type varies across pure points".into());
        }
        if !self.euler_integral {
            v.push("generic Euler coefficients are not polynomial in T".into());
        }
        v
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }
}

fn check_point(
    f: &StructuredFamilyWD,
    generic: &FamilyWD,
    gen_euler: &Poly<RatFunc>,
    gen_ranks: &[usize],
    tau: &GroundScalar,
    opts: &RecoveryOptions,
) -> Result<PointRecord> {
    let fiber = specialize(generic, tau)?;
    let blockwise = specialize_structured(f, tau)?;
    let recovered = recover_structure(&fiber, opts)?;
    let purity = purity_verdict(&recovered);
    let fr = monodromy_ranks(&fiber.monodromy);
    let ranks: Vec<(usize, usize, usize)> = gen_ranks.iter().zip(&fr).enumerate().map(|(k, (&g, &x))| (k + 1, g, x)).collect();
    let rank_drop = ranks.iter().any(|&(_, g, x)| x < g);
    let structure_transfer = if purity.pure {
        Some(blocks_isomorphic(&recovered, &blockwise)?)
    } else {
        None
    };
    Ok(PointRecord {
        tau: tau.clone(),
        purity,
        structure_transfer,
        ranks,
        rank_drop,
        euler_interpolated: eval_poly(gen_euler, tau)?,
        euler_fiber: fiber.euler_factor(opts.cap)?,
        automorphic_type: recovered.automorphic_type(),
    })
}

/// At each point: structure transfer, invariance of monodromy ranks and
/// interpolation of the Euler factor, plus constancy of the automorphic type
/// across points. Non-pure fibres are reported but make no claims.
///
/// Points must live at the family's level; `opts.cyclo_mult` is ignored here
/// (lift the family beforehand instead).
pub fn verify_purity_theorem(f: &StructuredFamilyWD, points: &[GroundScalar], opts: &RecoveryOptions) -> Result<PurityTheoremReport> {
    verify_with(f, &f.to_matrix()?, points, opts)
}

/// As [`verify_purity_theorem`] for a family given by matrices; the block
/// structure is that of the generic fibre.
pub fn verify_purity_theorem_matrix(f: &FamilyWD, points: &[GroundScalar], opts: &RecoveryOptions) -> Result<PurityTheoremReport> {
    let s = generic_structure(f, &RecoveryOptions { cyclo_mult: 1, ..opts.clone() })?;
    verify_with(&s, f, points, opts)
}

fn verify_with(f: &StructuredFamilyWD, generic: &FamilyWD, points: &[GroundScalar], opts: &RecoveryOptions) -> Result<PurityTheoremReport> {
    let opts = &RecoveryOptions { cyclo_mult: 1, ..opts.clone() };
    let gen_euler = generic_euler(generic, opts.cap)?;
    let euler_integral = is_integral(&gen_euler);
    let generic_ranks = monodromy_ranks(&generic.monodromy);
    let records: Vec<Result<PointRecord>> = points
        .par_iter()
        .map(|tau| check_point(f, generic, &gen_euler, &generic_ranks, tau, opts))
        .collect();
    let points = records.into_iter().collect::<Result<Vec<_>>>()?;
    let mut types = points.iter().filter(|p| p.applicable()).map(|p| &p.automorphic_type);
    let at_constant = match types.next() {
        Some(first) => types.all(|t| t == first),
        None => true,
    };
    Ok(PurityTheoremReport {
        generic_euler: gen_euler,
        euler_integral,
        generic_ranks,
        points,
        at_constant,
    })
}

/// `Sp_t(chi_T)` with `chi_T(phi) = factor * constant` and no inertia.
pub fn unramified_family_block(f: &crate::scalars::GroundField, n_inertia: usize, t: usize, factor: RatFunc, constant: QMonomial) -> SpBlock<crate::wd::FamilyTwist> {
    SpBlock {
        t,
        rep: IrredRep {
            twist: crate::wd::FamilyTwist::new(factor, constant),
            inertia: vec![Matrix::identity(f, 1); n_inertia],
            phi0: Matrix::identity(f, 1),
        },
    }
}
