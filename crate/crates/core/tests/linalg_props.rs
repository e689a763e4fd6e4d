use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use wdrep_core::linalg::{self, Matrix};
use wdrep_core::sample;
use wdrep_core::scalars::{GroundField, GroundScalar, ResidueParams};

fn k3() -> GroundField {
    GroundField::new(&ResidueParams::new(3, 1, 1).unwrap())
}

fn low_rank(rng: &mut StdRng, k: &GroundField, n: usize) -> Matrix<GroundScalar> {
    let r = rng.gen_range(0..=n);
    let a = sample::int_matrix(rng, k, n, r, 3);
    let b = sample::int_matrix(rng, k, r, n, 3);
    if r == 0 {
        Matrix::zero(k, n, n)
    } else {
        a.mul(&b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity_and_rref(seed in any::<u64>(), n in 1usize..=8) {
        let k = k3();
        let mut rng = StdRng::seed_from_u64(seed);
        let a = low_rank(&mut rng, &k, n);
        prop_assert_eq!(a.rank() + a.kernel().dim(), n);
        let (r, piv) = a.rref();
        let (r2, piv2) = r.rref();
        prop_assert_eq!(r2, r);
        prop_assert_eq!(piv2, piv);
    }

    #[test]
    fn jordan_chevalley_laws(seed in any::<u64>(), n in 1usize..=6) {
        let k = k3();
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, d, _) = sample::jordan_chevalley_case(&mut rng, &k, n);
        let (s, u) = linalg::jordan_chevalley(&a).unwrap();
        prop_assert!(s.commutes_with(&u));
        prop_assert_eq!(s.mul(&u), a);
        let mp = linalg::minpoly(&s).unwrap();
        prop_assert_eq!(mp.squarefree_part().degree(), mp.degree());
        prop_assert!(u.sub(&Matrix::identity(&k, n)).pow(n as i64).unwrap().is_zero());
        prop_assert_eq!(&s, &d);
        let (s2, u2) = linalg::jordan_chevalley(&s).unwrap();
        prop_assert_eq!(s2, s);
        prop_assert!(u2.is_identity());
    }

    #[test]
    fn partition_is_a_conjugation_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let k = k3();
        let mut rng = StdRng::seed_from_u64(seed);
        let (m, parts, _) = sample::nilpotent(&mut rng, &k, n);
        prop_assert_eq!(linalg::nilpotent_partition(&m).unwrap(), parts.clone());
        let p = Matrix::random_unimodular(&k, n, &mut rng);
        let c = p.mul(&m).mul(&p.inverse().unwrap());
        prop_assert_eq!(linalg::nilpotent_partition(&c).unwrap(), parts);
    }

    #[test]
    fn group_closure_is_a_fixpoint(seed in any::<u64>(), which in 0usize..3) {
        let p = sample::block_params([2, 3, 5][which]);
        let k = GroundField::new(&p);
        let mut rng = StdRng::seed_from_u64(seed);
        let (inertia, phi0) = sample::finite_part(&mut rng, &p, 2);
        let gens = vec![inertia[0].clone(), phi0];
        let g = linalg::group_closure(&k, 2, &gens, 1000).unwrap();
        for x in &g {
            prop_assert!(g.contains(&x.inverse().unwrap()));
            for y in &g {
                prop_assert!(g.contains(&x.mul(y)));
            }
        }
        let again = linalg::group_closure(&k, 2, &g, 1000).unwrap();
        prop_assert_eq!(again.len(), g.len());
    }
}
