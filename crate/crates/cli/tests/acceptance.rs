//! Acceptance gate. Every criterion runs sequentially in one test so that
//! the wall-clock budgets below are measured without contention, and each
//! prints one PASS/FAIL line.
//!
//! All checks are exact: the tolerance is zero everywhere.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wdrep_core::families::{unramified_family_block, verify_purity_theorem, verify_purity_theorem_matrix};
use wdrep_core::io::{self, Object};
use wdrep_core::linalg::{self, Matrix, Subspace, DEFAULT_CAP};
use wdrep_core::pseudo::{verify_purity_pseudo, words_up_to, LiftWithPurePoint, PseudoRep};
use wdrep_core::sample;
use wdrep_core::scalars::{int, parse_ratfunc, rat, weight_of, Field, GroundField, GroundScalar, Poly, QMonomial, RatFunc, ResidueParams};
use wdrep_core::structure::{blocks_isomorphic, purity_verdict, recover_structure, RecoveryOptions};
use wdrep_core::wd::{monodromy_filtration, unramified_block, FamilyWD, StructuredRep, WdRep, WeilWord};

const SEED: u64 = 0x5eed_0001;

const BUDGET_FILTRATION: Duration = Duration::from_secs(30);
const BUDGET_JORDAN_CHEVALLEY: Duration = Duration::from_secs(30);
const BUDGET_ROUND_TRIP: Duration = Duration::from_secs(120);
const BUDGET_PURITY_RULE: Duration = Duration::from_secs(10);
const BUDGET_FAMILY_HARNESS: Duration = Duration::from_secs(30);
const BUDGET_EULER: Duration = Duration::from_secs(30);
const BUDGET_PSEUDO_CHARPOLY: Duration = Duration::from_secs(30);
const BUDGET_PSEUDO_PURITY: Duration = Duration::from_secs(30);
const BUDGET_SERIALIZATION: Duration = Duration::from_secs(10);

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q3() -> ResidueParams {
    ResidueParams::new(3, 1, 1).unwrap()
}

fn fixtures() -> PathBuf {
    std::env::var_os("WDREP_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

fn load(name: &str) -> Object {
    io::parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn filtration() -> Outcome {
    let k = GroundField::new(&q3());
    let mut rng = StdRng::seed_from_u64(SEED);
    for case in 0..200 {
        let n = rng.gen_range(1..=10);
        let (m, parts, basis) = sample::nilpotent(&mut rng, &k, n);
        let filt = monodromy_filtration(&m).map_err(|e| e.to_string())?;
        ensure(filt.check_axioms(&m), || format!("case {case}: axioms fail"))?;
        // oracle: in the Jordan basis, vector i of a block of size t has weight t-1-2i
        let mut weights = Vec::new();
        for &t in &parts {
            weights.extend((0..t).map(|i| t as i64 - 1 - 2 * i as i64));
        }
        let mut off = 0;
        let mut cols = Vec::new();
        for &t in &parts {
            cols.extend(off..off + t);
            off += t;
        }
        for step in -(n as i64) - 1..=n as i64 {
            let vecs = cols.iter().filter(|&&j| weights[j] <= step).map(|&j| basis.col(j)).collect();
            let expect = Subspace::from_vectors(&k, n, vecs);
            ensure(filt.step(step) == &expect, || format!("case {case}: M_{step} differs from the Jordan oracle"))?;
        }
    }
    Ok(())
}

fn jordan_chevalley() -> Outcome {
    let k = GroundField::new(&q3());
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    for case in 0..200 {
        let n = rng.gen_range(1..=6);
        let (a, d, _) = sample::jordan_chevalley_case(&mut rng, &k, n);
        let (s, u) = linalg::jordan_chevalley(&a).map_err(|e| e.to_string())?;
        let id = Matrix::identity(&k, n);
        let mp = linalg::minpoly(&s).map_err(|e| e.to_string())?;
        ensure(s.commutes_with(&u), || format!("case {case}: S and U do not commute"))?;
        ensure(s.mul(&u) == a, || format!("case {case}: SU != A"))?;
        ensure(mp.squarefree_part().degree() == mp.degree(), || format!("case {case}: minpoly(S) not squarefree"))?;
        ensure(u.sub(&id).pow(n as i64).unwrap().is_zero(), || format!("case {case}: U not unipotent"))?;
        ensure(s == d, || format!("case {case}: S differs from the conjugated diagonal part"))?;
        let v = WdRep::new(q3(), vec![], a.clone(), Matrix::zero(&k, n, n));
        let once = v.frobenius_semisimplify().map_err(|e| e.to_string())?;
        let twice = once.frobenius_semisimplify().map_err(|e| e.to_string())?;
        ensure(once == twice, || format!("case {case}: semisimplification not idempotent"))?;
    }
    Ok(())
}

fn structure_round_trip() -> Outcome {
    let opts = RecoveryOptions::default();
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    for case in 0..200 {
        let p = sample::block_params([2, 3, 5][case % 3]);
        let s = sample::structured(&mut rng, &p, 3, 3, 2);
        let m = sample::conjugate(&mut rng, &s.to_matrix().map_err(|e| e.to_string())?);
        let r = recover_structure(&m, &opts).map_err(|e| format!("case {case}: {e}"))?;
        ensure(blocks_isomorphic(&r, &s).unwrap(), || format!("case {case}: blocks differ at q = {}", p.q))?;
    }
    Ok(())
}

fn purity_rule() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 3);
    let p = q3();
    for case in 0..50 {
        let chi = if case % 2 == 0 {
            sample::qmonomial(&mut rng, &p)
        } else {
            let w = rng.gen_range(-3..=3);
            sample::weil_qmonomial(&mut rng, &p, w)
        };
        let w_chi = weight_of(&chi, &p);
        for t in 1..=4 {
            let s = StructuredRep::new(p, 0, vec![unramified_block(&p, 0, t, chi.clone())]).unwrap();
            let v = purity_verdict(&s);
            let expect = w_chi.map(|w| w - (t as i64 - 1));
            ensure(v.pure == w_chi.is_some() && v.weight == expect, || {
                format!("chi = {chi}, t = {t}: verdict {:?} vs rule {expect:?}", v.weight)
            })?;
        }
    }
    let Object::Matrix(sp2) = load("sp2_trivial_q3.wdrep") else {
        return Err("sp2_trivial_q3 is not a matrix document".into());
    };
    let v = purity_verdict(&recover_structure(&sp2, &RecoveryOptions::default()).map_err(|e| e.to_string())?);
    ensure(v.pure && v.weight == Some(-1), || format!("Sp_2(trivial) at q = 3: {:?}", v.weight))
}

fn family_harness() -> Outcome {
    let p = q3();
    let k = GroundField::new(&p);
    let g = |r| GroundScalar::from_rational(&k, &r);
    let f = StructuredRep::new(p, 0, vec![unramified_family_block(&k, 0, 2, RatFunc::t(&k), QMonomial::one(1))]).unwrap();
    let points = [g(int(1)), g(int(3)), g(rat(1, 3)), g(int(5)), g(int(-1)), g(int(9))];
    let report = verify_purity_theorem(&f, &points, &RecoveryOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("violations {:?}", report.violations()))?;
    let expect = parse_ratfunc("-T/3", &k).unwrap();
    ensure(report.generic_euler.coeffs() == [RatFunc::one(&k), expect], || format!("generic Euler {}", report.generic_euler))?;
    for rec in &report.points {
        let non_weil = rec.tau == g(int(5));
        ensure(rec.applicable() != non_weil, || format!("purity at {} misreported", rec.tau))?;
        if rec.applicable() {
            ensure(rec.structure_transfer == Some(true) && !rec.rank_drop && rec.euler_matches(), || format!("claim fails at {}", rec.tau))?;
            let direct = Poly::new(&k, vec![GroundScalar::one(&k), rec.tau.mul(&g(rat(-1, 3)))]);
            ensure(rec.euler_fiber == direct, || format!("Euler factor at {}", rec.tau))?;
        }
    }

    let rf = |s: &str| parse_ratfunc(s, &k).unwrap();
    let m = |rows: [[&str; 2]; 2]| Matrix::from_rows(&k, rows.iter().map(|r| r.iter().map(|x| rf(x)).collect()).collect()).unwrap();
    let degenerate: FamilyWD = WdRep::new(p, vec![], m([["1", "0"], ["0", "1/3"]]), m([["0", "0"], ["T", "0"]]));
    let points = [g(int(0)), g(int(1)), g(int(3)), g(rat(1, 3))];
    let report = verify_purity_theorem_matrix(&degenerate, &points, &RecoveryOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("degenerate family: violations {:?}", report.violations()))?;
    for rec in &report.points {
        let zero = rec.tau.is_zero();
        ensure(rec.rank_drop == zero, || format!("rank drop misplaced at {}", rec.tau))?;
        ensure(rec.applicable() != zero, || format!("non-purity misplaced at {}", rec.tau))?;
    }
    Ok(())
}

fn euler_multiplicativity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 5);
    for case in 0..100 {
        let p = sample::block_params([2, 3, 5][case % 3]);
        let a = sample::matrix_wd(&mut rng, &p, 2, 3, 2);
        let b = sample::matrix_wd(&mut rng, &p, 2, 3, 2);
        let e = |v: &WdRep<GroundScalar>| v.euler_factor(DEFAULT_CAP).map_err(|e| e.to_string());
        let (ea, eb) = (e(&a)?, e(&b)?);
        ensure(e(&a.direct_sum(&b).unwrap())? == ea.mul(&eb), || format!("case {case}: not multiplicative"))?;
        ensure(e(&sample::conjugate(&mut rng, &a))? == ea, || format!("case {case}: basis dependent"))?;
    }
    Ok(())
}

fn pseudo_charpoly() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let mut done = 0;
    while done < 50 {
        let p = sample::block_params([2, 3, 5][done % 3]);
        let v = sample::matrix_wd(&mut rng, &p, 2, 2, 2);
        if v.dim() > 4 {
            continue;
        }
        let t = PseudoRep::stored(v.clone());
        for w in words_up_to(v.inertia.len(), 3) {
            let newton = t.charpoly(&w).map_err(|e| e.to_string())?;
            let direct = linalg::charpoly(&v.evaluate(&w).unwrap()).unwrap();
            ensure(newton == direct, || format!("word {w}: {newton} vs {direct}"))?;
        }
        done += 1;
    }
    let Object::Pseudo(diag) = load("diag23.wdrep") else {
        return Err("diag23 is not a ground pseudorepresentation".into());
    };
    let k = diag.ctx().clone();
    let cp = diag.charpoly(&WeilWord::phi(1)).map_err(|e| e.to_string())?;
    let expect = Poly::new(&k, [6, -5, 1].iter().map(|&c| GroundScalar::from_int(&k, c)).collect());
    ensure(cp == expect, || format!("diag(2,3): {cp}"))
}

fn pseudo_purity() -> Outcome {
    let Object::PseudoFamily(base) = load("pseudo_base.wdrep") else {
        return Err("pseudo_base is not a family pseudorepresentation".into());
    };
    let p = base.params();
    let k = base.ctx().clone();
    let rf = |s: &str| parse_ratfunc(s, &k).unwrap();
    let one = GroundScalar::one(&k);
    let sp2 = |factor: &str| {
        StructuredRep::new(p, 0, vec![unramified_family_block(&k, 0, 2, rf(factor), QMonomial::one(1))])
            .unwrap()
            .to_matrix()
            .unwrap()
    };
    let mut rng = StdRng::seed_from_u64(SEED + 7);
    // the second lift lives in its own variable U, written in a different basis
    let a = LiftWithPurePoint::new(sp2("T"), rf("T"), one.clone()).map_err(|e| e.to_string())?;
    let b = LiftWithPurePoint::new(sample::conjugate_family(&mut rng, &sp2("T")), rf("T"), one.clone()).map_err(|e| e.to_string())?;
    let shifted = LiftWithPurePoint::new(sp2("T + 1"), rf("T + 1"), GroundScalar::zero(&k))
        .map_err(|e| e.to_string())?
        .with_hints(vec![GroundScalar::from_int(&k, -1)]);
    for (name, pair) in [("U", [&a, &b]), ("U - 1", [&a, &shifted])] {
        let r = verify_purity_pseudo(&base, pair, &RecoveryOptions::default(), SEED).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("lift {name}: {:?}", r.violations()))?;
        ensure(r.lifts[0].m() == r.lifts[1].m() && r.lifts[0].t_vector == r.lifts[1].t_vector, || format!("lift {name}: shapes differ"))?;
        ensure(r.lifts.iter().all(|l| l.unique_under_basis_change), || format!("lift {name}: basis dependent"))?;
    }
    Ok(())
}

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_wdrep")).args(args).output().ok()?.status.code()
}

fn serialization() -> Outcome {
    let mut names: Vec<PathBuf> = std::fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "wdrep"))
        .collect();
    names.sort();
    ensure(!names.is_empty(), || "no fixtures found".into())?;
    for path in &names {
        let text = std::fs::read_to_string(path).unwrap();
        let obj = io::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(io::print(&obj) == text, || format!("{} is not in canonical form", path.display()))?;
    }
    let mut rng = StdRng::seed_from_u64(SEED + 8);
    for case in 0..200 {
        let obj = sample::document(&mut rng);
        let text = io::print(&obj);
        let back = io::parse(&text).map_err(|e| format!("document {case}: {e}"))?;
        ensure(io::print(&back) == text, || format!("document {case} does not round trip"))?;
    }
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let cases = [
        (0, vec!["euler".to_string(), f("sp2_trivial_q3.wdrep")]),
        (1, vec!["iso".to_string(), f("sp2.wdrep"), f("sum_of_chars.wdrep")]),
        (2, vec!["validate".to_string(), f("invalid/header_q6.wdrep")]),
        (3, vec!["decompose".to_string(), f("golden.wdrep")]),
    ];
    for (want, args) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = exit_code(&args);
        ensure(got == Some(want), || format!("{args:?}: exit {got:?}, expected {want}"))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("monodromy filtration axioms and Jordan oracle", BUDGET_FILTRATION, filtration),
        ("Jordan-Chevalley laws", BUDGET_JORDAN_CHEVALLEY, jordan_chevalley),
        ("structure round trip", BUDGET_ROUND_TRIP, structure_round_trip),
        ("purity rule for Sp_t", BUDGET_PURITY_RULE, purity_rule),
        ("family purity harness", BUDGET_FAMILY_HARNESS, family_harness),
        ("Euler multiplicativity and invariance", BUDGET_EULER, euler_multiplicativity),
        ("pseudorepresentation charpoly", BUDGET_PSEUDO_CHARPOLY, pseudo_charpoly),
        ("purity for pseudorepresentations", BUDGET_PSEUDO_PURITY, pseudo_purity),
        ("serialization and exit codes", BUDGET_SERIALIZATION, serialization),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(()) if elapsed <= *budget => "PASS".to_string(),
            Ok(()) => format!("FAIL (over budget by {:.2?})", elapsed - *budget),
            Err(e) => format!("FAIL ({e})"),
        };
        println!("criterion {}: {verdict} | {name} | {elapsed:.2?} of {budget:?} | tolerance exact", i + 1);
        if !verdict.starts_with("PASS") {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
