//! Pseudorepresentations as trace oracles on Weil words, their
//! characteristic polynomials, and the rigidity checks for lifts and sums.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::families::{specialize, specialize_structured};
use crate::linalg::Matrix;
use crate::scalars::{Field, GroundField, GroundScalar, Poly, RatFunc, ResidueParams};
use crate::structure::{
    blocks_isomorphic, purity_verdict, recover_structure, wd_endomorphism_dim, PurityVerdict, RecoveryOptions,
};
use crate::wd::{sp_to_matrix, spanning_words, FamilyWD, IrredRep, Letter, SpBlock, StructuredFamilyWD, WdRep, WeilWord};

/// Where a pseudorepresentation's trace comes from.
#[derive(Debug, Clone)]
pub enum Backing<F: Field> {
    Stored(WdRep<F>),
    Sum(Vec<WdRep<F>>),
}

/// A trace function of fixed dimension on Weil words.
#[derive(Debug, Clone)]
pub struct PseudoRep<F: Field> {
    backing: Backing<F>,
}

impl<F: Field<Ctx = GroundField>> PseudoRep<F> {
    pub fn stored(v: WdRep<F>) -> Self {
        PseudoRep { backing: Backing::Stored(v) }
    }

    /// The sum of the traces of `parts`, which must share parameters and the
    /// number of inertia generators.
    pub fn sum(parts: Vec<WdRep<F>>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::DimensionMismatch("a sum needs at least one part".into()));
        };
        if parts.iter().any(|p| p.params != first.params || p.inertia.len() != first.inertia.len()) {
            return Err(Error::ParamsMismatch);
        }
        Ok(PseudoRep { backing: Backing::Sum(parts) })
    }

    pub fn backing(&self) -> &Backing<F> {
        &self.backing
    }

    pub fn parts(&self) -> &[WdRep<F>] {
        match &self.backing {
            Backing::Stored(v) => std::slice::from_ref(v),
            Backing::Sum(v) => v,
        }
    }

    pub fn dim(&self) -> usize {
        self.parts().iter().map(|p| p.dim()).sum()
    }

    pub fn params(&self) -> ResidueParams {
        self.parts()[0].params
    }

    pub fn ctx(&self) -> &GroundField {
        self.parts()[0].ctx()
    }

    pub fn n_inertia(&self) -> usize {
        self.parts()[0].inertia.len()
    }

    pub fn trace(&self, w: &WeilWord) -> Result<F> {
        let mut acc = F::zero(self.ctx());
        for p in self.parts() {
            acc = acc.add(&p.trace(w)?);
        }
        Ok(acc)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        let mut parts = self.parts().to_vec();
        parts.extend(o.parts().iter().cloned());
        Self::sum(parts)
    }

    /// `T(1) = d` and `T(xy) = T(yx)` for all word pairs of total length at
    /// most `max_len`.
    pub fn check_central(&self, max_len: usize) -> Result<bool> {
        if self.trace(&WeilWord::empty())? != F::from_int(self.ctx(), self.dim() as i64) {
            return Ok(false);
        }
        let words = words_up_to(self.n_inertia(), max_len);
        for x in &words {
            for y in &words {
                if x.len() + y.len() > max_len {
                    continue;
                }
                if self.trace(&x.concat(y))? != self.trace(&y.concat(x))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn charpoly(&self, x: &WeilWord) -> Result<Poly<F>> {
        charpoly_of_element(self, x)
    }
}

/// All words of length at most `len` in `phi^{+-1}` and the inertia
/// generators.
pub fn words_up_to(n_inertia: usize, len: usize) -> Vec<WeilWord> {
    let mut letters = vec![Letter::Phi(1), Letter::Phi(-1)];
    letters.extend((0..n_inertia).map(|j| Letter::Inertia(j, 1)));
    let mut out = vec![WeilWord::empty()];
    let mut layer = vec![WeilWord::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for l in &letters {
                next.push(w.concat(&WeilWord::new(vec![*l])));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `P_{x,T}(X)` from the power sums `T(x^k)`, `k = 1..=d`, by Newton's
/// identities `k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i`.
pub fn charpoly_of_element<F: Field<Ctx = GroundField>>(t: &PseudoRep<F>, x: &WeilWord) -> Result<Poly<F>> {
    let d = t.dim();
    let ctx = t.ctx();
    let p: Vec<F> = (1..=d).map(|k| t.trace(&x.pow(k))).collect::<Result<_>>()?;
    let mut e = vec![F::one(ctx)];
    for k in 1..=d {
        let mut acc = F::zero(ctx);
        for i in 1..=k {
            let term = e[k - i].mul(&p[i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        let inv_k = F::from_int(ctx, k as i64).inv().expect("characteristic zero");
        e.push(acc.mul(&inv_k));
    }
    let coeffs = (0..=d)
        .map(|j| {
            let k = d - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                e[k].neg()
            }
        })
        .collect();
    Ok(Poly::new(ctx, coeffs))
}

/// A family over its own variable, an injective map from the base's
/// coefficients (the image of the base variable), and a point of the family
/// whose fibre is expected to be pure.
#[derive(Debug, Clone)]
pub struct LiftWithPurePoint {
    pub lift: FamilyWD,
    pub embedding: RatFunc,
    pub point: GroundScalar,
    /// Centres for the family root search on this lift.
    pub hints: Vec<GroundScalar>,
}

impl LiftWithPurePoint {
    pub fn new(lift: FamilyWD, embedding: RatFunc, point: GroundScalar) -> Result<Self> {
        if embedding.as_constant().is_some() {
            return Err(Error::InvalidParams("a constant embedding is not injective".into()));
        }
        Ok(LiftWithPurePoint {
            lift,
            embedding,
            point,
            hints: Vec::new(),
        })
    }

    pub fn with_hints(mut self, hints: Vec<GroundScalar>) -> Self {
        self.hints = hints;
        self
    }

    fn push(&self, x: &RatFunc) -> Result<RatFunc> {
        x.compose(&self.embedding)
            .ok_or_else(|| Error::Unrepresentable(format!("{x} has a pole along the embedding")))
    }
}

/// Outcome for one lift.
#[derive(Debug, Clone)]
pub struct LiftRecord {
    pub fiber_purity: PurityVerdict,
    pub t_vector: Vec<usize>,
    pub automorphic_type: Vec<(usize, usize)>,
    /// The pure fibre's structure equals the specialized generic blocks;
    /// `None` when the fibre is not pure.
    pub fiber_matches: Option<bool>,
    pub unique_under_basis_change: bool,
    /// Sorted `(t, index of the matching base constituent)` per block;
    /// `None` if some factor matches no constituent.
    pub factor_classes: Option<Vec<(usize, usize)>>,
}

impl LiftRecord {
    pub fn m(&self) -> usize {
        self.t_vector.len()
    }
}

#[derive(Debug, Clone)]
pub struct PseudoPurityReport {
    pub base_constituents: usize,
    pub lifts: Vec<LiftRecord>,
    /// Same `m`, `t`-vector and factor dimensions.
    pub shared_shape: bool,
    pub factors_match: bool,
}

impl PseudoPurityReport {
    /// Lifts whose fibre at the chosen point is not pure.
    pub fn precondition_failures(&self) -> Vec<usize> {
        self.lifts.iter().enumerate().filter(|(_, l)| !l.fiber_purity.pure).map(|(i, _)| i).collect()
    }

    /// Claims that fail although every precondition holds.
    pub fn violations(&self) -> Vec<String> {
        if !self.precondition_failures().is_empty() {
            return Vec::new();
        }
        let mut v = Vec::new();
        for (i, l) in self.lifts.iter().enumerate() {
            if l.fiber_matches != Some(true) {
                v.push(format!("lift {i}: fibre structure differs from the specialized generic blocks"));
            }
            if !l.unique_under_basis_change {
                v.push(format!("lift {i}: recovery depends on the basis"));
            }
            if l.factor_classes.is_none() {
                v.push(format!("lift {i}: a factor matches no base constituent"));
            }
        }
        if !self.shared_shape {
            v.push("lifts disagree on (m, t, dims)".into());
        }
        if !self.factors_match {
            v.push("lift factors differ through the base".into());
        }
        v
    }

    pub fn consistent(&self) -> bool {
        self.shared_shape && self.factors_match
    }

    pub fn passed(&self) -> bool {
        self.precondition_failures().is_empty() && self.violations().is_empty()
    }
}

fn check_restriction(base: &PseudoRep<RatFunc>, l: &LiftWithPurePoint) -> Result<()> {
    if l.lift.params != base.params() || l.lift.inertia.len() != base.n_inertia() || l.lift.dim() != base.dim() {
        return Err(Error::TraceMismatch("lift and base differ in parameters or dimension".into()));
    }
    let mut reps = vec![l.lift.clone()];
    reps.extend(base.parts().iter().cloned());
    for w in spanning_words(&reps) {
        let want = l.push(&base.trace(&w)?)?;
        if l.lift.trace(&w)? != want {
            return Err(Error::TraceMismatch(format!("at word {w}: lift {} vs base {want}", l.lift.trace(&w)?)));
        }
    }
    Ok(())
}

/// Irreducible constituents of the semisimplified base, one per class.
fn base_constituents(base: &PseudoRep<RatFunc>, opts: &RecoveryOptions) -> Result<Vec<IrredRep<crate::wd::FamilyTwist>>> {
    let mut out: Vec<(IrredRep<crate::wd::FamilyTwist>, FamilyWD)> = Vec::new();
    for p in base.parts() {
        let ss = WdRep::new(p.params, p.inertia.clone(), p.frobenius.clone(), Matrix::zero(p.ctx(), p.dim(), p.dim()));
        for b in recover_structure(&ss, opts)?.blocks {
            let real = sp_to_matrix(&b, &p.params)?;
            let mut seen = false;
            for (_, r) in &out {
                if traces_equal(r, &real)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                out.push((b.rep, real));
            }
        }
    }
    Ok(out.into_iter().map(|(r, _)| r).collect())
}

fn traces_equal(a: &FamilyWD, b: &FamilyWD) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    for w in spanning_words(&[a.clone(), b.clone()]) {
        if a.trace(&w)? != b.trace(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn t_vector(s: &StructuredFamilyWD) -> Vec<usize> {
    let mut t: Vec<usize> = s.blocks.iter().map(|b| b.t).collect();
    t.sort_unstable();
    t
}

fn check_lift(
    base: &PseudoRep<RatFunc>,
    constituents: &[IrredRep<crate::wd::FamilyTwist>],
    l: &LiftWithPurePoint,
    opts: &RecoveryOptions,
    seed: u64,
) -> Result<LiftRecord> {
    check_restriction(base, l)?;
    let lopts = RecoveryOptions {
        hints: l.hints.clone(),
        cyclo_mult: 1,
        ..opts.clone()
    };
    let generic = recover_structure(&l.lift, &lopts)?;

    let fiber = recover_structure(&specialize(&l.lift, &l.point)?, &lopts)?;
    let fiber_purity = purity_verdict(&fiber);
    let fiber_matches = if fiber_purity.pure {
        Some(match specialize_structured(&generic, &l.point) {
            Ok(s) => blocks_isomorphic(&fiber, &s)?,
            Err(_) => false,
        })
    } else {
        None
    };

    let mut rng = StdRng::seed_from_u64(seed);
    let p = Matrix::random_unimodular(l.lift.ctx(), l.lift.dim(), &mut rng);
    let again = recover_structure(&l.lift.change_basis(&p)?, &lopts)?;
    let unique_under_basis_change = t_vector(&again) == t_vector(&generic) && blocks_isomorphic(&again, &generic)?;

    let pushed: Vec<FamilyWD> = constituents
        .iter()
        .map(|c| {
            let twist = crate::wd::FamilyTwist::new(l.push(&c.twist.factor)?, c.twist.constant.clone());
            let rep = IrredRep { twist, ..c.clone() };
            sp_to_matrix(&SpBlock { t: 1, rep }, &l.lift.params)
        })
        .collect::<Result<_>>()?;
    let mut classes = Vec::with_capacity(generic.blocks.len());
    for b in &generic.blocks {
        let real = sp_to_matrix(&SpBlock { t: 1, rep: b.rep.clone() }, &generic.params)?;
        let mut hit = None;
        for (k, c) in pushed.iter().enumerate() {
            if traces_equal(c, &real)? {
                hit = Some(k);
                break;
            }
        }
        classes.push(hit.map(|k| (b.t, k)));
    }
    let factor_classes = classes.into_iter().collect::<Option<Vec<_>>>().map(|mut v| {
        v.sort_unstable();
        v
    });

    Ok(LiftRecord {
        fiber_purity,
        t_vector: t_vector(&generic),
        automorphic_type: generic.automorphic_type(),
        fiber_matches,
        unique_under_basis_change,
        factor_classes,
    })
}

/// Check two lifts of the base pseudorepresentation against each other:
/// trace restriction (an error if it fails), purity of each chosen fibre,
/// agreement of the fibre with the generic structure, basis independence,
/// and agreement of `(m, t, dims)` and of the factors through the base.
///
/// `opts.hints` serve the base; each lift carries its own. `seed` drives
/// the random basis change.
pub fn verify_purity_pseudo(
    base: &PseudoRep<RatFunc>,
    lifts: [&LiftWithPurePoint; 2],
    opts: &RecoveryOptions,
    seed: u64,
) -> Result<PseudoPurityReport> {
    let bopts = RecoveryOptions { cyclo_mult: 1, ..opts.clone() };
    let constituents = base_constituents(base, &bopts)?;
    let (a, b) = rayon::join(
        || check_lift(base, &constituents, lifts[0], &bopts, seed),
        || check_lift(base, &constituents, lifts[1], &bopts, seed.wrapping_add(1)),
    );
    let (a, b) = (a?, b?);
    let shared_shape = a.t_vector == b.t_vector && a.automorphic_type == b.automorphic_type;
    let factors_match = a.factor_classes.is_some() && a.factor_classes == b.factor_classes;
    Ok(PseudoPurityReport {
        base_constituents: constituents.len(),
        lifts: vec![a, b],
        shared_shape,
        factors_match,
    })
}

#[derive(Debug, Clone)]
pub struct PuritySumReport {
    pub t_vector: Vec<usize>,
    pub automorphic_type: Vec<(usize, usize)>,
    pub fiber_weights: Vec<Option<i64>>,
    /// The fibre of the sum decomposes as the specialized generic blocks.
    pub transfer: bool,
}

impl PuritySumReport {
    pub fn m(&self) -> usize {
        self.t_vector.len()
    }
}

/// Direct sum of families that are individually irreducible (as
/// Weil-Deligne representations: one `Sp_t` block with an absolutely
/// irreducible factor) with irreducible pure fibres at `point`.
pub fn verify_purity_sum(summands: &[FamilyWD], point: &GroundScalar, opts: &RecoveryOptions) -> Result<PuritySumReport> {
    let Some(first) = summands.first() else {
        return Err(Error::DimensionMismatch("no summands".into()));
    };
    let opts = &RecoveryOptions { cyclo_mult: 1, ..opts.clone() };
    let mut fiber_weights = Vec::with_capacity(summands.len());
    for (i, s) in summands.iter().enumerate() {
        if wd_endomorphism_dim(s) != 1 {
            return Err(Error::NotIrreducible(format!("summand {i}")));
        }
        let fib = specialize(s, point)?;
        if wd_endomorphism_dim(&fib) != 1 {
            return Err(Error::NotIrreducible(format!("fibre of summand {i} at {point}")));
        }
        let v = purity_verdict(&recover_structure(&fib, opts)?);
        if !v.pure {
            return Err(Error::NotPure(format!("fibre of summand {i} at {point}")));
        }
        fiber_weights.push(v.weight);
    }
    let mut sum = first.clone();
    for s in &summands[1..] {
        sum = sum.direct_sum(s)?;
    }
    let generic = recover_structure(&sum, opts)?;
    let fiber = recover_structure(&specialize(&sum, point)?, opts)?;
    let transfer = match specialize_structured(&generic, point) {
        Ok(s) => blocks_isomorphic(&fiber, &s)?,
        Err(_) => false,
    };
    Ok(PuritySumReport {
        t_vector: t_vector(&generic),
        automorphic_type: generic.automorphic_type(),
        fiber_weights,
        transfer,
    })
}
