use super::*;
use crate::scalars::{int, rat, Rational};
use crate::wd::{unramified_block, GroundBlock, MatrixWD};

fn p3() -> ResidueParams {
    ResidueParams::new(3, 1, 1).unwrap()
}

fn k(p: &ResidueParams) -> GroundField {
    GroundField::new(p)
}

fn qm(r: Rational, p: &ResidueParams) -> QMonomial {
    QMonomial::from_rational(&r, p).unwrap()
}

fn mat(p: &ResidueParams, rows: &[&[Rational]]) -> Matrix<GroundScalar> {
    let f = k(p);
    Matrix::from_rows(&f, rows.iter().map(|r| r.iter().map(|x| GroundScalar::from_rational(&f, x)).collect()).collect()).unwrap()
}

fn opts() -> RecoveryOptions {
    RecoveryOptions::default()
}

/// A fixed unimodular change of basis of size `n`.
fn shuffle(p: &ResidueParams, n: usize) -> Matrix<GroundScalar> {
    let f = k(p);
    Matrix::from_fn(&f, n, n, |i, j| {
        let v = if i == j {
            1
        } else if j == i + 1 {
            2
        } else if i == j + 2 {
            -1
        } else {
            0
        };
        GroundScalar::from_int(&f, v)
    })
}

/// `Ind` of an order-3 character: inertia `diag(z, z^-1)`, `phi0` the swap.
fn dihedral(p: &ResidueParams, twist: QMonomial) -> GroundBlock {
    let f = k(p);
    let z = GroundScalar::zeta(&f, 1);
    let zero = GroundScalar::zero(&f);
    let one = GroundScalar::one(&f);
    let sigma = Matrix::from_rows(&f, vec![vec![z.clone(), zero.clone()], vec![zero.clone(), z.inv().unwrap()]]).unwrap();
    let swap = Matrix::from_rows(&f, vec![vec![zero.clone(), one.clone()], vec![one, zero]]).unwrap();
    SpBlock {
        t: 1,
        rep: IrredRep {
            twist,
            inertia: vec![sigma],
            phi0: swap,
        },
    }
}

#[test]
fn recovers_sp2_from_matrix() {
    let p = p3();
    let phi = mat(&p, &[&[int(1), int(0)], &[int(0), rat(1, 3)]]);
    let e21 = mat(&p, &[&[int(0), int(0)], &[int(1), int(0)]]);
    let v = WdRep::new(p, vec![], phi.clone(), e21);
    let s = recover_structure(&v, &opts()).unwrap();
    assert_eq!(s.blocks, vec![unramified_block(&p, 0, 2, QMonomial::one(1))]);

    let v0 = WdRep::new(p, vec![], phi, Matrix::zero(&k(&p), 2, 2));
    let s0 = recover_structure(&v0, &opts()).unwrap();
    let mut tw: Vec<QMonomial> = s0.blocks.iter().map(|b| b.rep.twist.clone()).collect();
    tw.sort();
    let mut want = vec![QMonomial::one(1), QMonomial::q_power(-1, &p)];
    want.sort();
    assert_eq!(tw, want);
    assert!(s0.blocks.iter().all(|b| b.t == 1));
}

#[test]
fn golden_ratio_is_unsupported() {
    let p = p3();
    let phi = mat(&p, &[&[int(0), int(1)], &[int(1), int(1)]]);
    let v = WdRep::new(p, vec![], phi, Matrix::zero(&k(&p), 2, 2));
    assert!(matches!(recover_structure(&v, &opts()), Err(Error::EigenvaluesOutsideSupportedField(_))));
}

#[test]
fn round_trip_after_basis_change() {
    let p = ResidueParams::new(5, 1, 3).unwrap();
    let chi = qm(int(2), &p);
    let blocks = vec![
        dihedral(&p, QMonomial::one(3)),
        SpBlock { t: 2, ..dihedral(&p, chi.clone()) },
        SpBlock {
            t: 3,
            rep: IrredRep {
                twist: QMonomial::q_power(1, &p),
                inertia: vec![Matrix::identity(&k(&p), 1)],
                phi0: Matrix::identity(&k(&p), 1),
            },
        },
    ];
    let s = StructuredRep::new(p, 1, blocks).unwrap();
    let m = s.to_matrix().unwrap();
    assert!(m.validate().is_valid());
    let conj = m.change_basis(&shuffle(&p, m.dim())).unwrap();
    let r = recover_structure(&conj, &opts()).unwrap();
    assert_eq!(r.automorphic_type(), s.automorphic_type());
    assert!(blocks_isomorphic(&r, &s).unwrap());
    // canonical bases make the result independent of the input basis
    let r0 = recover_structure(&m, &opts()).unwrap();
    let key = |x: &StructuredWD| {
        let mut v: Vec<String> = x.blocks.iter().map(|b| format!("{b:?}")).collect();
        v.sort();
        v
    };
    assert_eq!(key(&r0), key(&r));
}

#[test]
fn splits_multiplicities_and_mixed_constituents() {
    let p = ResidueParams::new(5, 1, 3).unwrap();
    let f = k(&p);
    let d = dihedral(&p, QMonomial::one(3));
    let line = SpBlock {
        t: 1,
        rep: IrredRep {
            twist: QMonomial::one(3),
            inertia: vec![Matrix::identity(&f, 1)],
            phi0: Matrix::identity(&f, 1),
        },
    };
    let s = StructuredRep::new(p, 1, vec![d.clone(), d.clone(), line.clone(), line]).unwrap();
    let m = s.to_matrix().unwrap().change_basis(&shuffle(&p, 6)).unwrap();
    let r = recover_structure(&m, &opts()).unwrap();
    assert_eq!(r.automorphic_type(), vec![(1, 1), (1, 1), (2, 1), (2, 1)]);
    assert!(blocks_isomorphic(&r, &s).unwrap());
}

#[test]
fn purity_examples() {
    let p = p3();
    let sp2 = StructuredRep::new(p, 0, vec![unramified_block(&p, 0, 2, QMonomial::one(1))]).unwrap();
    let v = purity_verdict(&sp2);
    assert!(v.pure);
    assert_eq!(v.weight, Some(-1));

    let sum = StructuredRep::new(
        p,
        0,
        vec![
            unramified_block(&p, 0, 1, QMonomial::one(1)),
            unramified_block(&p, 0, 1, QMonomial::q_power(-1, &p)),
        ],
    )
    .unwrap();
    let v = purity_verdict(&sum);
    assert!(!v.pure);
    assert_eq!(v.blocks.iter().map(|b| b.weight).collect::<Vec<_>>(), vec![Some(0), Some(-2)]);

    let two = StructuredRep::new(p, 0, vec![unramified_block(&p, 0, 1, qm(int(2), &p))]).unwrap();
    let v = purity_verdict(&two);
    assert!(!v.pure);
    assert_eq!(v.blocks[0].weight, None);

    let m = sp2.to_matrix().unwrap().change_basis(&shuffle(&p, 2)).unwrap();
    assert_eq!(matrix_purity_verdict(&m, &opts()).unwrap().weight, Some(-1));
}

#[test]
fn automorphic_type_and_size() {
    let p = ResidueParams::new(5, 1, 3).unwrap();
    let s = StructuredRep::new(
        p,
        0,
        vec![
            unramified_block(&p, 0, 2, QMonomial::one(3)),
            unramified_block(&p, 0, 1, qm(int(3), &p)),
        ],
    )
    .unwrap();
    assert_eq!(s.automorphic_type(), vec![(1, 1), (1, 2)]);
    assert_eq!(s.size(), 2);
    let d3 = StructuredRep::new(p, 1, vec![SpBlock { t: 3, ..dihedral(&p, QMonomial::one(3)) }]).unwrap();
    assert_eq!(d3.automorphic_type(), vec![(2, 3)]);
    assert_eq!(d3.size(), 3);
}

#[test]
fn isomorphism_examples() {
    let p = p3();
    let o = opts();
    let sp2 = sp_to_matrix(&unramified_block(&p, 0, 2, QMonomial::one(1)), &p).unwrap();
    let conj = sp2.change_basis(&shuffle(&p, 2)).unwrap();
    assert!(wd_isomorphic(&sp2, &conj, &o).unwrap());
    let lines = StructuredRep::new(
        p,
        0,
        vec![
            unramified_block(&p, 0, 1, QMonomial::one(1)),
            unramified_block(&p, 0, 1, QMonomial::q_power(-1, &p)),
        ],
    )
    .unwrap()
    .to_matrix()
    .unwrap();
    assert!(!wd_isomorphic(&sp2, &lines, &o).unwrap());
    let a = sp_to_matrix(&unramified_block(&p, 0, 1, qm(int(2), &p)), &p).unwrap();
    let b = sp_to_matrix(&unramified_block(&p, 0, 1, qm(int(3), &p)), &p).unwrap();
    assert!(!wd_isomorphic(&a, &b, &o).unwrap());
}

#[test]
fn irreducibility_examples() {
    let p = p3();
    let f = k(&p);
    let triv: MatrixWD = WdRep::new(p, vec![], Matrix::identity(&f, 1), Matrix::zero(&f, 1, 1));
    assert!(irreducibility_check(&triv, 100).unwrap());
    let d = WdRep::new(
        p,
        vec![],
        mat(&p, &[&[int(1), int(0)], &[int(0), rat(1, 3)]]),
        Matrix::zero(&f, 2, 2),
    );
    assert!(!irreducibility_check(&d, 100).unwrap());
    let dih = WdRep::new(
        p,
        vec![mat(&p, &[&[int(0), int(1)], &[int(1), int(0)]])],
        mat(&p, &[&[int(5), int(0)], &[int(0), int(-5)]]),
        Matrix::zero(&f, 2, 2),
    );
    assert!(irreducibility_check(&dih, 100).unwrap());
}

#[test]
fn cyclotomic_multiplier_unlocks_roots_of_unity() {
    // Frobenius of order 3 at level 1: eigenvalues need zeta_3
    let p = ResidueParams::new(2, 1, 1).unwrap();
    let phi = mat(&p, &[&[int(0), int(-1)], &[int(1), int(-1)]]);
    let v = WdRep::new(p, vec![], phi, Matrix::zero(&k(&p), 2, 2));
    assert!(matches!(recover_structure(&v, &opts()), Err(Error::EigenvaluesOutsideSupportedField(_))));
    let o = RecoveryOptions { cyclo_mult: 3, ..opts() };
    let s = recover_structure(&v, &o).unwrap();
    assert_eq!(s.params.level, 3);
    assert_eq!(s.automorphic_type(), vec![(1, 1), (1, 1)]);
}

#[test]
fn cap_is_reported() {
    let p = ResidueParams::new(5, 1, 3).unwrap();
    let s = StructuredRep::new(p, 1, vec![dihedral(&p, QMonomial::one(3))]).unwrap();
    let m = s.to_matrix().unwrap();
    assert_eq!(recover_structure(&m, &RecoveryOptions::with_cap(2)).unwrap_err(), Error::CapExceeded(2));
}
