//! Recovering the block structure of a Weil-Deligne representation, and the
//! invariants read off from it: purity, weights, size, automorphic type and
//! isomorphism.

mod decompose;
mod qpoly;
mod roots;

pub use roots::{family_roots, qmonomial_roots, TwistField};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::{weight_of, Field, GroundField, GroundScalar, QMonomial, ResidueParams};
use crate::wd::{sp_to_matrix, spanning_words, IrredRep, SpBlock, StructuredRep, StructuredWD, Twist, WdRep};

use decompose::{decompose, Piece};

/// Knobs shared by every operation that recovers structure.
#[derive(Debug, Clone)]
pub struct RecoveryOptions {
    /// Bound on the size of any finite group closure.
    pub cap: usize,
    /// Work at cyclotomic level `N * cyclo_mult` (for eigenvalues that need
    /// more roots of unity than the input level provides).
    pub cyclo_mult: u32,
    /// Points `c` whose factors `T - c` may appear in family eigenvalues.
    pub hints: Vec<GroundScalar>,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            cap: linalg::DEFAULT_CAP,
            cyclo_mult: 1,
            hints: Vec::new(),
        }
    }
}

impl RecoveryOptions {
    pub fn with_cap(cap: usize) -> Self {
        RecoveryOptions { cap, ..Self::default() }
    }
}

/// Re-express a representation at cyclotomic level `N * mult`.
pub fn lift_level<F: TwistField>(v: &WdRep<F>, mult: u32) -> WdRep<F> {
    if mult <= 1 {
        return v.clone();
    }
    let params = v.params.at_level(v.params.level * mult);
    let field = GroundField::new(&params);
    let lift = |m: &Matrix<F>| m.map(&field, |x| x.lift(&field));
    WdRep::new(params, v.inertia.iter().map(lift).collect(), lift(&v.frobenius), lift(&v.monodromy))
}

fn prepare<F: TwistField>(v: &WdRep<F>, opts: &RecoveryOptions) -> Result<(WdRep<F>, Vec<GroundScalar>)> {
    if v.inertia.iter().all(|g| g.rows() == v.dim() && g.cols() == v.dim()) && v.inertia.iter().all(|g| g.inverse().is_ok()) {
        linalg::group_closure(v.ctx(), v.dim(), &v.inertia, opts.cap)?;
    }
    let d = v.validate_with_cap(opts.cap);
    if !d.is_valid() {
        let names: Vec<String> = d.failures().iter().map(|c| c.name.clone()).collect();
        return Err(Error::InvalidDatum(names.join(", ")));
    }
    let lifted = lift_level(v, opts.cyclo_mult.max(1));
    let field = lifted.ctx().clone();
    let hints = opts.hints.iter().map(|h| h.lift_to(&field)).collect();
    Ok((lifted, hints))
}

fn traces_agree<F: Field<Ctx = GroundField>>(a: &WdRep<F>, b: &WdRep<F>) -> Result<bool> {
    if a.dim() != b.dim() || a.inertia.len() != b.inertia.len() {
        return Ok(false);
    }
    let pair = [a.clone(), b.clone()];
    for w in spanning_words(&pair) {
        if a.trace(&w)? != b.trace(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ground_finite_part<F: TwistField>(p: &Piece<F>) -> Result<(Vec<Matrix<GroundScalar>>, Matrix<GroundScalar>)> {
    let conv = |m: &Matrix<F>| {
        roots::ground_matrix(m).ok_or_else(|| Error::Unrepresentable("finite part is not constant in T".into()))
    };
    let inertia = p.inertia.iter().map(conv).collect::<Result<_>>()?;
    Ok((inertia, conv(&p.phi0)?))
}

/// Block decomposition `(+) Sp_{t_i}(chi_i (x) rho_i)` of a valid
/// representation, after Frobenius semisimplification.
///
/// Chain bottoms of length exactly `t` live in `ker N /\ im N^{t-1}` modulo
/// `ker N /\ im N^t`; each bottom space is split into absolutely irreducible
/// pieces, classified by traces, and counted.
pub fn recover_structure<F: TwistField>(v: &WdRep<F>, opts: &RecoveryOptions) -> Result<StructuredRep<F::Tw>> {
    let (v, hints) = prepare(v, opts)?;
    // Bottoms are Frobenius-stable, and the semisimple part of a restriction
    // is the restriction of the semisimple part, so only the small pieces
    // are semisimplified.
    let n = v.dim();
    let ctx = v.ctx().clone();
    let params = v.params;
    let nm = &v.monodromy;
    let ker = nm.kernel();
    let mut bottoms = Vec::new();
    let mut p = Matrix::identity(&ctx, n);
    for _ in 0..n {
        let kt = ker.intersect(&p.image())?;
        if kt.is_zero() {
            break;
        }
        bottoms.push(kt);
        p = p.mul(nm);
    }

    let mut classes: Vec<(Piece<F>, WdRep<F>)> = Vec::new();
    let mut counts: Vec<Vec<usize>> = Vec::new();
    for kt in &bottoms {
        let (phi, _) = linalg::jordan_chevalley(&v.frobenius.restrict(kt)?)?;
        let inertia: Vec<Matrix<F>> = v.inertia.iter().map(|g| g.restrict(kt)).collect::<Result<_>>()?;
        let mut cnt = vec![0usize; classes.len()];
        for piece in decompose(&phi, &inertia, &hints, opts.cap)? {
            let real = piece.realized(params)?;
            let mut found = None;
            for (i, (_, r)) in classes.iter().enumerate() {
                if traces_agree(r, &real)? {
                    found = Some(i);
                    break;
                }
            }
            let i = match found {
                Some(i) => i,
                None => {
                    classes.push((piece, real));
                    cnt.push(0);
                    classes.len() - 1
                }
            };
            cnt[i] += 1;
        }
        counts.push(cnt);
    }

    let mut blocks = Vec::new();
    for (ti, cnt) in counts.iter().enumerate() {
        let t = ti + 1;
        for (c, &here) in cnt.iter().enumerate() {
            let above = counts.get(ti + 1).and_then(|x| x.get(c)).copied().unwrap_or(0);
            if here < above {
                return Err(Error::InvalidDatum("monodromy chains are inconsistent".into()));
            }
            if here == above {
                continue;
            }
            let piece = &classes[c].0;
            let (inertia, phi0) = ground_finite_part(piece)?;
            let twist = piece.twist.times(&QMonomial::q_power(t as i64 - 1, &params));
            for _ in 0..here - above {
                blocks.push(SpBlock {
                    t,
                    rep: IrredRep {
                        twist: twist.clone(),
                        inertia: inertia.clone(),
                        phi0: phi0.clone(),
                    },
                });
            }
        }
    }
    StructuredRep::new(params, v.inertia.len(), blocks)
}

/// Weight status of one block's central Frobenius class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPurity {
    pub t: usize,
    pub dim: usize,
    pub central: QMonomial,
    pub weight: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityVerdict {
    pub pure: bool,
    pub weight: Option<i64>,
    pub blocks: Vec<BlockPurity>,
}

/// Pure of weight `w` iff every block's central class
/// `chi(phi) q^{-(t-1)/2}` is a Weil number of weight `w`.
pub fn purity_verdict(s: &StructuredWD) -> PurityVerdict {
    let blocks: Vec<BlockPurity> = s
        .blocks
        .iter()
        .map(|b| {
            let central = b.central_twist(&s.params);
            BlockPurity {
                t: b.t,
                dim: b.rep.dim(),
                weight: weight_of(&central, &s.params),
                central,
            }
        })
        .collect();
    let first = blocks.first().and_then(|b| b.weight);
    let pure = first.is_some() && blocks.iter().all(|b| b.weight == first);
    PurityVerdict {
        pure,
        weight: if pure { first } else { None },
        blocks,
    }
}

/// Recover, then test purity.
pub fn matrix_purity_verdict(v: &WdRep<GroundScalar>, opts: &RecoveryOptions) -> Result<PurityVerdict> {
    Ok(purity_verdict(&recover_structure(v, opts)?))
}

fn block_realization<Tw: Twist>(b: &SpBlock<Tw>, params: &ResidueParams) -> Result<WdRep<Tw::F>> {
    sp_to_matrix(&SpBlock { t: 1, rep: b.rep.clone() }, params)
}

/// Equality of block multisets, factors compared by traces.
pub fn blocks_isomorphic<Tw: Twist>(a: &StructuredRep<Tw>, b: &StructuredRep<Tw>) -> Result<bool> {
    if a.params != b.params || a.n_inertia != b.n_inertia || a.blocks.len() != b.blocks.len() || a.dim() != b.dim() {
        return Ok(false);
    }
    let ra: Vec<WdRep<Tw::F>> = a.blocks.iter().map(|x| block_realization(x, &a.params)).collect::<Result<_>>()?;
    let rb: Vec<WdRep<Tw::F>> = b.blocks.iter().map(|x| block_realization(x, &b.params)).collect::<Result<_>>()?;
    let mut used = vec![false; rb.len()];
    'outer: for (i, x) in ra.iter().enumerate() {
        for (j, y) in rb.iter().enumerate() {
            if used[j] || a.blocks[i].t != b.blocks[j].t {
                continue;
            }
            if traces_agree(x, y)? {
                used[j] = true;
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Isomorphism of (the Frobenius semisimplifications of) two valid
/// representations.
pub fn wd_isomorphic<F: TwistField>(a: &WdRep<F>, b: &WdRep<F>, opts: &RecoveryOptions) -> Result<bool> {
    if a.params != b.params || a.dim() != b.dim() || a.inertia.len() != b.inertia.len() {
        return Ok(false);
    }
    let sa = recover_structure(a, opts)?;
    let sb = recover_structure(b, opts)?;
    blocks_isomorphic(&sa, &sb)
}

/// Isomorphism of structured representations, through their matrix forms.
pub fn structured_isomorphic(a: &StructuredWD, b: &StructuredWD, opts: &RecoveryOptions) -> Result<bool> {
    wd_isomorphic(&a.to_matrix()?, &b.to_matrix()?, opts)
}

/// Absolute irreducibility of the Weil group action: the commutant of
/// `{Phi} u inertia` is the scalars.
pub fn irreducibility_check<F: Field<Ctx = GroundField>>(v: &WdRep<F>, cap: usize) -> Result<bool> {
    linalg::group_closure(v.ctx(), v.dim(), &v.inertia, cap)?;
    let mut gens = v.inertia.clone();
    gens.push(v.frobenius.clone());
    Ok(linalg::commutant(v.ctx(), v.dim(), &gens).len() == 1)
}

/// Dimension of the commutant of `{Phi, N} u inertia`; it is 1 exactly when
/// the Frobenius-semisimple representation is a single `Sp_t` block.
pub fn wd_endomorphism_dim<F: Field<Ctx = GroundField>>(v: &WdRep<F>) -> usize {
    let mut gens = v.inertia.clone();
    gens.push(v.frobenius.clone());
    gens.push(v.monodromy.clone());
    linalg::commutant(v.ctx(), v.dim(), &gens).len()
}

#[cfg(test)]
mod tests;
