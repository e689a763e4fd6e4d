use super::*;
use crate::error::Error;
use crate::linalg::{self, Matrix};
use crate::scalars::{int, rat, Field, GroundField, GroundScalar, QMonomial, Rational, ResidueParams};

fn p3() -> ResidueParams {
    ResidueParams::new(3, 1, 1).unwrap()
}

fn k3() -> GroundField {
    GroundField::new(&p3())
}

fn m(rows: &[&[Rational]]) -> Matrix<GroundScalar> {
    let k = k3();
    Matrix::from_rows(
        &k,
        rows.iter()
            .map(|r| r.iter().map(|x| GroundScalar::from_rational(&k, x)).collect())
            .collect(),
    )
    .unwrap()
}

fn mi(rows: &[&[i64]]) -> Matrix<GroundScalar> {
    let rs: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let refs: Vec<&[Rational]> = rs.iter().map(|r| r.as_slice()).collect();
    m(&refs)
}

fn wd(phi: Matrix<GroundScalar>, n: Matrix<GroundScalar>, inertia: Vec<Matrix<GroundScalar>>) -> MatrixWD {
    WdRep::new(p3(), inertia, phi, n)
}

fn sp(t: usize, chi: QMonomial) -> GroundBlock {
    unramified_block(&p3(), 0, t, chi)
}

#[test]
fn validate_examples() {
    let phi = m(&[&[int(1), int(0)], &[int(0), rat(1, 3)]]);
    let e21 = mi(&[&[0, 0], &[1, 0]]);
    let e12 = mi(&[&[0, 1], &[0, 0]]);
    assert!(wd(phi.clone(), e21, vec![]).validate().is_valid());
    let bad = wd(phi.clone(), e12, vec![]).validate();
    assert!(!bad.is_valid());
    assert_eq!(bad.failures()[0].name, "frobenius_relation");
    let e11 = mi(&[&[1, 0], &[0, 0]]);
    let d = wd(phi, e11, vec![]).validate();
    assert!(d.failures().iter().any(|c| c.name == "monodromy_nilpotent"));
}

#[test]
fn evaluate_examples() {
    let v = sp_to_matrix(&sp(2, QMonomial::one(1)), &p3()).unwrap();
    let f = v.evaluate(&WeilWord::phi(1)).unwrap();
    assert_eq!(f, m(&[&[rat(1, 3), int(0)], &[int(0), int(1)]]));
    assert!(v.evaluate(&WeilWord::empty()).unwrap().is_identity());
    let w = WeilWord::phi(1).concat(&WeilWord::phi(-1));
    assert!(v.evaluate(&w).unwrap().is_identity());
    assert!(matches!(v.evaluate(&WeilWord::inertia(0, 1)), Err(Error::IndexOutOfRange(_))));
}

#[test]
fn sp_to_matrix_examples() {
    let v = sp_to_matrix(&sp(2, QMonomial::one(1)), &p3()).unwrap();
    assert!(v.validate().is_valid());
    assert_eq!(v.frobenius, m(&[&[rat(1, 3), int(0)], &[int(0), int(1)]]));
    assert_eq!(v.monodromy.rank(), 1);

    let five = QMonomial::from_rational(&int(5), &p3()).unwrap();
    let v1 = sp_to_matrix(&sp(1, five), &p3()).unwrap();
    assert_eq!(v1.frobenius, mi(&[&[5]]));
    assert!(v1.monodromy.is_zero());

    let v3 = sp_to_matrix(&sp(3, QMonomial::one(1)), &p3()).unwrap();
    assert!(v3.validate().is_valid());
    let cp = linalg::charpoly(&v3.frobenius).unwrap();
    let k = k3();
    for e in [int(1), rat(1, 3), rat(1, 9)] {
        assert!(cp.eval(&GroundScalar::from_rational(&k, &e)).is_zero());
    }
    assert_eq!(linalg::nilpotent_partition(&v3.monodromy).unwrap(), vec![3]);
}

#[test]
fn sums_and_twists() {
    let chi = QMonomial::from_rational(&int(2), &p3()).unwrap();
    let s = StructuredRep::new(p3(), 0, vec![sp(2, QMonomial::one(1))]).unwrap();
    let c = StructuredRep::new(p3(), 0, vec![sp(1, chi)]).unwrap();
    let sum = s.direct_sum(&c).unwrap();
    assert_eq!(sum.automorphic_type(), vec![(1, 1), (1, 2)]);
    assert_eq!(s.twist_unramified(&QMonomial::one(1)), s);
    let qinv = QMonomial::q_power(-1, &p3());
    let tw = s.twist_unramified(&qinv).to_matrix().unwrap();
    let direct = sp_to_matrix(&sp(2, qinv.clone()), &p3()).unwrap();
    assert_eq!(tw, direct);
    let mtw = s.to_matrix().unwrap().twist_unramified(&GroundScalar::q_power(&k3(), -1));
    assert_eq!(mtw, direct);
    let other = ResidueParams::new(5, 1, 1).unwrap();
    let s5 = StructuredRep::<QMonomial>::new(other, 0, vec![]).unwrap();
    assert_eq!(s.direct_sum(&s5), Err(Error::ParamsMismatch));
}

#[test]
fn semisimplification_examples() {
    let j = wd(mi(&[&[1, 1], &[0, 1]]), Matrix::zero(&k3(), 2, 2), vec![]);
    assert!(j.frobenius_semisimplify().unwrap().frobenius.is_identity());
    let b = wd(mi(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]), Matrix::zero(&k3(), 3, 3), vec![]);
    let s = b.frobenius_semisimplify().unwrap();
    assert_eq!(s.frobenius, mi(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]));
    assert_eq!(s.frobenius_semisimplify().unwrap(), s);
    let d = wd(mi(&[&[2, 0], &[0, 3]]), Matrix::zero(&k3(), 2, 2), vec![]);
    assert_eq!(d.frobenius_semisimplify().unwrap(), d);
}

#[test]
fn filtration_examples() {
    let j3 = mi(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
    let f = monodromy_filtration(&j3).unwrap();
    let dims: Vec<usize> = (-2..=2).map(|k| f.step(k).dim()).collect();
    assert_eq!(dims, vec![1, 1, 2, 2, 3]);
    assert_eq!(f.gr_dims(), vec![(-2, 1), (0, 1), (2, 1)]);
    assert!(f.check_axioms(&j3));

    let z = Matrix::<GroundScalar>::zero(&k3(), 3, 3);
    let f0 = monodromy_filtration(&z).unwrap();
    assert!(f0.step(-1).is_zero());
    assert_eq!(f0.step(0).dim(), 3);

    let n21 = mi(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
    let f21 = monodromy_filtration(&n21).unwrap();
    assert_eq!(f21.gr_dims(), vec![(-1, 1), (0, 1), (1, 1)]);
    assert_eq!(monodromy_filtration(&mi(&[&[1]])), Err(Error::NotNilpotent));
}

#[test]
fn euler_examples() {
    let k = k3();
    let e3 = sp_to_matrix(&sp(3, QMonomial::one(1)), &p3()).unwrap().euler_factor(1000).unwrap();
    assert_eq!(e3.to_string(), "1 - (1/9)*X");
    let e2 = sp_to_matrix(&sp(2, QMonomial::one(1)), &p3()).unwrap().euler_factor(1000).unwrap();
    assert_eq!(e2.to_string(), "1 - (1/3)*X");

    let ram = wd(mi(&[&[7]]), Matrix::zero(&k, 1, 1), vec![mi(&[&[-1]])]);
    assert!(ram.validate().is_valid());
    assert!(ram.euler_factor(1000).unwrap().is_one());

    let a = sp_to_matrix(&sp(2, QMonomial::one(1)), &p3()).unwrap();
    let b = wd(mi(&[&[2]]), Matrix::zero(&k, 1, 1), vec![]);
    let ab = a.direct_sum(&b).unwrap();
    assert_eq!(
        ab.euler_factor(1000).unwrap(),
        a.euler_factor(1000).unwrap().mul(&b.euler_factor(1000).unwrap())
    );
}

#[test]
fn irreducibility_of_dihedral_finite_part() {
    let r = IrredRep {
        twist: QMonomial::one(1),
        inertia: vec![mi(&[&[0, 1], &[1, 0]])],
        phi0: mi(&[&[1, 0], &[0, -1]]),
    };
    assert!(r.check(100).unwrap());
    let red = IrredRep {
        twist: QMonomial::one(1),
        inertia: vec![],
        phi0: mi(&[&[1, 0], &[0, -1]]),
    };
    assert!(!red.check(100).unwrap());
}
