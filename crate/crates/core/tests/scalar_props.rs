use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wdrep_core::sample;
use wdrep_core::scalars::{
    canonicalize_qmonomial, rat, weight_of, CycloElem, Field, GroundField, GroundScalar, QMonomial, Rational, ResidueParams,
};

const FIELDS: &[(u64, u32, u32)] = &[(3, 1, 1), (5, 1, 3), (3, 1, 4), (2, 1, 8), (7, 1, 12), (2, 2, 4), (3, 2, 1)];

fn field(i: usize) -> GroundField {
    let (ell, f, n) = FIELDS[i % FIELDS.len()];
    GroundField::new(&ResidueParams::new(ell, f, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>(), which in 0usize..FIELDS.len()) {
        let k = field(which);
        let mut rng = StdRng::seed_from_u64(seed);
        let a = sample::ground_scalar(&mut rng, &k, 5);
        let b = sample::ground_scalar(&mut rng, &k, 5);
        let c = sample::ground_scalar(&mut rng, &k, 5);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_multiplicative(
        n1 in 1i64..40, d1 in 1i64..40, a1 in -12i64..12, m1 in -4i64..4,
        n2 in -40i64..40, d2 in 1i64..40, a2 in -12i64..12, m2 in -4i64..4,
        which in 0usize..5,
    ) {
        prop_assume!(n2 != 0);
        let k = field(which);
        let p = k.params();
        let x = canonicalize_qmonomial(&rat(n1, d1), a1, m1, &p).unwrap();
        let y = canonicalize_qmonomial(&rat(n2, d2), a2, m2, &p).unwrap();
        let again = canonicalize_qmonomial(&signed_unit(&x), x.zeta as i64, x.half, &p).unwrap();
        prop_assert_eq!(&again, &x);
        let xy = canonicalize_qmonomial(&(rat(n1, d1) * rat(n2, d2)), a1 + a2, m1 + m2, &p).unwrap();
        prop_assert_eq!(x.mul(&y), xy.clone());
        let prod = x.to_scalar(&k).unwrap().mul(&y.to_scalar(&k).unwrap());
        prop_assert_eq!(prod, xy.to_scalar(&k).unwrap());
    }

    #[test]
    fn weights_add(seed in any::<u64>(), which in 0usize..FIELDS.len(), k in -3i64..3) {
        let p = field(which).params();
        let mut rng = StdRng::seed_from_u64(seed);
        let x = sample::qmonomial(&mut rng, &p);
        let y = sample::weil_qmonomial(&mut rng, &p, rng_range(seed, 5));
        if let (Some(wx), Some(wy)) = (weight_of(&x, &p), weight_of(&y, &p)) {
            prop_assert_eq!(weight_of(&x.mul(&y), &p), Some(wx + wy));
        }
        let wy = weight_of(&y, &p).unwrap();
        prop_assert_eq!(weight_of(&y.mul(&QMonomial::q_power(k, &p)), &p), Some(wy + 2 * k));
    }

    #[test]
    fn perfect_square_q_matches_cyclotomic_arithmetic(
        seed in any::<u64>(), square in prop::sample::select(vec![(2u64, 2u32), (3, 2), (5, 2)]), level in prop::sample::select(vec![1u32, 3, 4]),
    ) {
        let p = ResidueParams::new(square.0, square.1, level).unwrap();
        let k = GroundField::new(&p);
        prop_assert!(!k.is_formal());
        let root = square.0 as i64;
        let mut rng = StdRng::seed_from_u64(seed);
        let deg = k.cyclo().degree();
        let mut cyc = || CycloElem::new(level, (0..deg).map(|_| sample::rational(&mut rng, 4)).collect());
        let (e1, o1, e2, o2) = (cyc(), cyc(), cyc(), cyc());
        let x = GroundScalar::from_cyclo(&k, &e1, &o1);
        let y = GroundScalar::from_cyclo(&k, &e2, &o2);
        let sub = |e: &CycloElem, o: &CycloElem| e.add(&o.mul(&CycloElem::from_rational(level, rat(root, 1))));
        let (cx, cy) = (sub(&e1, &o1), sub(&e2, &o2));
        prop_assert_eq!(x.mul(&y).even_part(), cx.mul(&cy));
        prop_assert_eq!(x.add(&y).even_part(), cx.add(&cy));
        prop_assert_eq!(k.s().mul(&k.s()), GroundScalar::from_int(&k, p.q as i64));
    }
}

fn signed_unit(x: &QMonomial) -> Rational {
    if x.sign < 0 {
        -x.unit.clone()
    } else {
        x.unit.clone()
    }
}

fn rng_range(seed: u64, span: i64) -> i64 {
    (seed % (2 * span as u64 + 1)) as i64 - span
}
