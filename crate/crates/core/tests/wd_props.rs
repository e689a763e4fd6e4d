use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wdrep_core::linalg::{self, Matrix, Subspace};
use wdrep_core::sample;
use wdrep_core::scalars::{Field, GroundField, GroundScalar, ResidueParams};
use wdrep_core::wd::{monodromy_filtration, sp_to_matrix, WdRep, WeilWord};

const CAP: usize = linalg::DEFAULT_CAP;

fn params(which: usize) -> ResidueParams {
    sample::block_params([2, 3, 5][which])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sp_blocks_are_valid_of_dimension_td(seed in any::<u64>(), which in 0usize..3) {
        let p = params(which);
        let mut rng = StdRng::seed_from_u64(seed);
        let b = sample::block(&mut rng, &p, 4, 2);
        let v = sp_to_matrix(&b, &p).unwrap();
        prop_assert!(v.validate().is_valid());
        prop_assert_eq!(v.dim(), b.t * b.rep.dim());
    }

    #[test]
    fn semisimplification_is_idempotent_and_keeps_invariants(seed in any::<u64>(), which in 0usize..3) {
        let p = params(which);
        let mut rng = StdRng::seed_from_u64(seed);
        let base = sample::matrix_wd(&mut rng, &p, 2, 3, 2);
        let v = sample::non_semisimple(&mut rng, &base);
        prop_assert!(v.validate().is_valid());
        let ss = v.frobenius_semisimplify().unwrap();
        prop_assert_eq!(ss.frobenius_semisimplify().unwrap(), ss.clone());
        prop_assert_eq!(linalg::charpoly(&ss.frobenius).unwrap(), linalg::charpoly(&v.frobenius).unwrap());
        prop_assert_eq!(&ss.monodromy, &v.monodromy);
        prop_assert_eq!(&ss.inertia, &v.inertia);
        prop_assert_eq!(ss.euler_factor(CAP).unwrap(), v.euler_factor(CAP).unwrap());
        prop_assert!(ss.validate().is_valid());
    }

    #[test]
    fn filtration_matches_the_jordan_grading(seed in any::<u64>(), n in 1usize..=7) {
        let k = GroundField::new(&ResidueParams::new(3, 1, 1).unwrap());
        let mut rng = StdRng::seed_from_u64(seed);
        let (m, parts, pm) = sample::nilpotent(&mut rng, &k, n);
        let filt = monodromy_filtration(&m).unwrap();
        prop_assert!(filt.check_axioms(&m));
        let mut grades = Vec::new();
        let mut off = 0;
        for &t in &parts {
            for i in 0..t {
                grades.push((off + i, t as i64 - 1 - 2 * i as i64));
            }
            off += t;
        }
        for step in -(n as i64) - 1..=(n as i64) {
            let vecs: Vec<Vec<GroundScalar>> = grades.iter().filter(|(_, g)| *g <= step).map(|(j, _)| pm.col(*j)).collect();
            let expect = Subspace::from_vectors(&k, n, vecs);
            prop_assert_eq!(filt.step(step), &expect, "M_{}", step);
        }
    }

    #[test]
    fn euler_factor_is_multiplicative_and_basis_free(seed in any::<u64>(), which in 0usize..3) {
        let p = params(which);
        let mut rng = StdRng::seed_from_u64(seed);
        let a = sample::matrix_wd(&mut rng, &p, 2, 3, 2);
        let b = sample::matrix_wd(&mut rng, &p, 2, 3, 2);
        let ab = a.direct_sum(&b).unwrap();
        let ea = a.euler_factor(CAP).unwrap();
        let eb = b.euler_factor(CAP).unwrap();
        prop_assert_eq!(ab.euler_factor(CAP).unwrap(), ea.mul(&eb));
        let c = sample::conjugate(&mut rng, &a);
        prop_assert_eq!(c.euler_factor(CAP).unwrap(), ea);
    }

    #[test]
    fn group_law_relations_hold(seed in any::<u64>(), which in 0usize..3) {
        let p = params(which);
        let mut rng = StdRng::seed_from_u64(seed);
        let v: WdRep<GroundScalar> = sample::matrix_wd(&mut rng, &p, 3, 3, 2);
        let phi = &v.frobenius;
        let phi_inv = phi.inverse().unwrap();
        let q = GroundScalar::from_int(v.ctx(), p.q as i64);
        prop_assert_eq!(phi.mul(&v.monodromy).mul(&phi_inv).scale(&q), v.monodromy.clone());
        for s in &v.inertia {
            prop_assert_eq!(phi.mul(s).mul(&phi_inv), s.pow(p.q as i64).unwrap());
            prop_assert!(s.commutes_with(&v.monodromy));
        }
        let w = WeilWord::parse("phi*I0*phi^-1").unwrap();
        let sq = WeilWord::inertia(0, p.q as i64);
        prop_assert_eq!(v.evaluate(&w).unwrap(), v.evaluate(&sq).unwrap());
        prop_assert_eq!(v.evaluate(&WeilWord::empty()).unwrap(), Matrix::identity(v.ctx(), v.dim()));
    }
}
