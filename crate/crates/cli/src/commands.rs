use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use serde_json::{json, Value};
use wdrep_core::families::{specialize, specialize_structured, verify_purity_theorem, verify_purity_theorem_matrix, PurityTheoremReport};
use wdrep_core::io::{self, IoError, Object};
use wdrep_core::pseudo::PseudoRep;
use wdrep_core::scalars::{GroundField, GroundScalar, ResidueParams};
use wdrep_core::structure::{purity_verdict, recover_structure, wd_isomorphic, RecoveryOptions};
use wdrep_core::wd::{monodromy_filtration, FamilyWD, MatrixWD, StructuredRep, Twist, WeilWord};
use wdrep_core::Error;

use crate::{Cli, Command};

pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub result: Value,
    pub params: ResidueParams,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn core_code(e: &Error) -> u8 {
    match e {
        Error::EigenvaluesOutsideSupportedField(_) | Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(io) = cause.downcast_ref::<IoError>() {
            return match io {
                IoError::Core(c) => core_code(c),
                _ => 2,
            };
        }
        if let Some(c) = cause.downcast_ref::<Error>() {
            return core_code(c);
        }
    }
    2
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    dispatch(cli).map_err(|e| Failure {
        code: classify(&e),
        message: format!("{e:#}"),
    })
}

/// The report document for `--json`; documents that never parsed get a
/// header-less object.
pub fn json_report(cli: &Cli, result: &Result<Outcome, Failure>) -> String {
    let name = command_name(&cli.command);
    match result {
        Ok(o) => io::print(&io::report(&o.params, name, o.code, o.result.clone())),
        Err(f) => {
            let v = json!({"command": name, "exit_code": f.code, "result": {"error": f.message}});
            let mut s = serde_json::to_string_pretty(&v).expect("json");
            s.push('\n');
            s
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Analyze { .. } => "analyze",
        Command::Decompose { .. } => "decompose",
        Command::Euler { .. } => "euler",
        Command::Specialize { .. } => "specialize",
        Command::VerifyPurity { .. } => "verify-purity",
        Command::Iso { .. } => "iso",
        Command::PseudoCharpoly { .. } => "pseudo-charpoly",
    }
}

struct Loaded {
    /// Parameters as written in the file.
    original: ResidueParams,
    obj: Object,
}

impl Loaded {
    /// A scalar written at the file's level, moved to the working level.
    fn scalar(&self, text: &str) -> anyhow::Result<GroundScalar> {
        let x = io::parse_scalar(text, &self.original)?;
        Ok(x.lift_to(&GroundField::new(&self.obj.params())))
    }
}

fn load(path: &Path, mult: u32) -> anyhow::Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let obj = io::parse(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(Loaded {
        original: obj.params(),
        obj: obj.lift_level(mult),
    })
}

fn ground(obj: &Object) -> anyhow::Result<Option<MatrixWD>> {
    Ok(match obj {
        Object::Matrix(v) => Some(v.clone()),
        Object::Structured(s) => Some(s.to_matrix()?),
        _ => None,
    })
}

fn family(obj: &Object) -> anyhow::Result<Option<FamilyWD>> {
    Ok(match obj {
        Object::Family(v) => Some(v.clone()),
        Object::StructuredFamily(s) => Some(s.to_matrix()?),
        _ => None,
    })
}

fn kind_name(obj: &Object) -> String {
    serde_json::to_value(obj.kind()).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn doc_value(obj: &Object) -> Value {
    serde_json::from_str(&io::print(obj)).expect("printed documents are JSON")
}

fn ok(params: ResidueParams, code: u8, text: String, result: Value) -> anyhow::Result<Outcome> {
    Ok(Outcome { code, text, result, params })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let opts = RecoveryOptions::with_cap(cli.cap);
    match &cli.command {
        Command::Validate { file } => validate(file, cli.cyclo_mult),
        Command::Analyze { file } => analyze(&load(file, cli.cyclo_mult)?, &opts),
        Command::Decompose { file } => decompose(&load(file, cli.cyclo_mult)?, &opts),
        Command::Euler { file } => euler(&load(file, cli.cyclo_mult)?, cli.cap),
        Command::Specialize { file, at } => {
            let l = load(file, cli.cyclo_mult)?;
            let tau = l.scalar(at)?;
            let fib = match &l.obj {
                Object::Family(f) => Object::Matrix(specialize(f, &tau)?),
                Object::StructuredFamily(f) => Object::Structured(specialize_structured(f, &tau)?),
                other => bail!("specialize needs a family, found kind {}", kind_name(other)),
            };
            let text = io::print(&fib);
            ok(l.obj.params(), 0, text, json!({"at": tau.to_string(), "fiber": doc_value(&fib)}))
        }
        Command::VerifyPurity { file, points } => {
            let l = load(file, cli.cyclo_mult)?;
            let pts = points.iter().map(|p| l.scalar(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let r = match &l.obj {
                Object::StructuredFamily(f) => verify_purity_theorem(f, &pts, &opts)?,
                Object::Family(f) => verify_purity_theorem_matrix(f, &pts, &opts)?,
                other => bail!("verify-purity needs a family, found kind {}", kind_name(other)),
            };
            purity_outcome(l.obj.params(), &r)
        }
        Command::Iso { a, b } => {
            let la = load(a, cli.cyclo_mult)?;
            let lb = load(b, cli.cyclo_mult)?;
            let iso = match (ground(&la.obj)?, ground(&lb.obj)?, family(&la.obj)?, family(&lb.obj)?) {
                (Some(x), Some(y), _, _) => wd_isomorphic(&x, &y, &opts)?,
                (_, _, Some(x), Some(y)) => wd_isomorphic(&x, &y, &opts)?,
                _ => bail!("iso compares two representations of the same coefficient type"),
            };
            let text = if iso { "isomorphic\n" } else { "not isomorphic\n" };
            ok(la.obj.params(), if iso { 0 } else { 1 }, text.into(), json!({"isomorphic": iso}))
        }
        Command::PseudoCharpoly { file, word } => {
            let l = load(file, cli.cyclo_mult)?;
            let w = WeilWord::parse(word)?;
            let p = match &l.obj {
                Object::Pseudo(t) => t.charpoly(&w)?.to_string(),
                Object::PseudoFamily(t) => t.charpoly(&w)?.to_string(),
                other => match (ground(other)?, family(other)?) {
                    (Some(v), _) => PseudoRep::stored(v).charpoly(&w)?.to_string(),
                    (_, Some(v)) => PseudoRep::stored(v).charpoly(&w)?.to_string(),
                    _ => bail!("pseudo-charpoly needs a representation, found kind {}", kind_name(other)),
                },
            };
            ok(l.obj.params(), 0, format!("{p}\n"), json!({"word": w.to_string(), "charpoly": p}))
        }
    }
}

fn validate(file: &Path, mult: u32) -> anyhow::Result<Outcome> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    match io::parse(&text) {
        Ok(obj) => {
            let obj = obj.lift_level(mult);
            let mut out = format!("valid {} document\n", kind_name(&obj));
            if let Some(v) = ground(&obj)? {
                out.push_str(&v.validate().to_string());
            } else if let Some(v) = family(&obj)? {
                out.push_str(&v.validate().to_string());
            }
            ok(obj.params(), 0, out, json!({"valid": true, "kind": kind_name(&obj)}))
        }
        Err(IoError::InvariantViolation { summary, diagnostics }) => {
            let raw: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
            let h = &raw["header"];
            let params = ResidueParams::new(
                h["ell"].as_u64().unwrap_or(0),
                h["f"].as_u64().unwrap_or(0) as u32,
                h["cyclo_level"].as_u64().unwrap_or(0) as u32,
            )?;
            let mut out = format!("invalid: {summary}\n");
            for c in &diagnostics {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "{mark} {}{}", c.name, if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) });
            }
            ok(params, 1, out, json!({"valid": false, "summary": summary, "diagnostics": diagnostics}))
        }
        Err(e) => Err(e).with_context(|| format!("in {}", file.display())),
    }
}

fn analyze(l: &Loaded, opts: &RecoveryOptions) -> anyhow::Result<Outcome> {
    let params = l.obj.params();
    if let Some(v) = ground(&l.obj)? {
        let filt = monodromy_filtration(&v.monodromy)?;
        let gr: Vec<(i64, usize)> = filt.gr_dims().into_iter().filter(|&(_, d)| d > 0).collect();
        let s = recover_structure(&v, opts)?;
        let verdict = purity_verdict(&s);
        let mut out = format!("dimension {}\nmonodromy graded pieces:", v.dim());
        for (k, d) in &gr {
            let _ = write!(out, " gr_{k}={d}");
        }
        out.push('\n');
        match verdict.weight {
            Some(w) if verdict.pure => {
                let _ = writeln!(out, "pure of weight {w}");
            }
            _ => out.push_str("not pure\n"),
        }
        let mut blocks = Vec::new();
        for b in &verdict.blocks {
            let w = b.weight.map(|w| w.to_string()).unwrap_or_else(|| "none".into());
            let _ = writeln!(out, "  Sp_{} dim {} central {} weight {w}", b.t, b.dim, b.central);
            blocks.push(json!({"t": b.t, "dim": b.dim, "central": b.central.to_string(), "weight": b.weight}));
        }
        let _ = writeln!(out, "automorphic type {:?}", s.automorphic_type());
        return ok(
            params,
            0,
            out,
            json!({
                "dimension": v.dim(),
                "filtration": gr,
                "pure": verdict.pure,
                "weight": verdict.weight,
                "blocks": blocks,
                "automorphic_type": s.automorphic_type(),
            }),
        );
    }
    if let Some(v) = family(&l.obj)? {
        let filt = monodromy_filtration(&v.monodromy)?;
        let gr: Vec<(i64, usize)> = filt.gr_dims().into_iter().filter(|&(_, d)| d > 0).collect();
        let s = recover_structure(&v, opts)?;
        let mut out = format!("family of dimension {}\ngeneric monodromy graded pieces:", v.dim());
        for (k, d) in &gr {
            let _ = write!(out, " gr_{k}={d}");
        }
        let _ = writeln!(out, "\ngeneric automorphic type {:?}", s.automorphic_type());
        return ok(
            params,
            0,
            out,
            json!({"dimension": v.dim(), "filtration": gr, "automorphic_type": s.automorphic_type()}),
        );
    }
    bail!("analyze needs a representation, found kind {}", kind_name(&l.obj))
}

fn block_lines<Tw: Twist>(s: &StructuredRep<Tw>) -> String {
    let mut out = String::new();
    for b in &s.blocks {
        let _ = writeln!(out, "Sp_{}  twist {}  factor dim {}", b.t, b.rep.twist, b.rep.dim());
    }
    let _ = writeln!(out, "automorphic type {:?}", s.automorphic_type());
    out
}

fn decompose(l: &Loaded, opts: &RecoveryOptions) -> anyhow::Result<Outcome> {
    let params = l.obj.params();
    let (text, doc, at) = if let Some(v) = ground(&l.obj)? {
        let s = recover_structure(&v, opts)?;
        (block_lines(&s), Object::Structured(s.clone()), s.automorphic_type())
    } else if let Some(v) = family(&l.obj)? {
        let s = recover_structure(&v, opts)?;
        (block_lines(&s), Object::StructuredFamily(s.clone()), s.automorphic_type())
    } else {
        bail!("decompose needs a representation, found kind {}", kind_name(&l.obj));
    };
    ok(params, 0, text, json!({"automorphic_type": at, "structure": doc_value(&doc)}))
}

fn euler(l: &Loaded, cap: usize) -> anyhow::Result<Outcome> {
    let e = if let Some(v) = ground(&l.obj)? {
        v.euler_factor(cap)?.to_string()
    } else if let Some(v) = family(&l.obj)? {
        v.euler_factor(cap)?.to_string()
    } else {
        bail!("euler needs a representation, found kind {}", kind_name(&l.obj));
    };
    ok(l.obj.params(), 0, format!("{e}\n"), json!({"euler": e}))
}

fn purity_outcome(params: ResidueParams, r: &PurityTheoremReport) -> anyhow::Result<Outcome> {
    let mut out = format!("generic inverse Euler factor {}\n", r.generic_euler);
    let mut points = Vec::new();
    for p in &r.points {
        let status = match p.purity.weight {
            Some(w) if p.applicable() => format!("pure of weight {w}"),
            _ => "not pure (no claims)".into(),
        };
        let v = p.violations();
        let _ = writeln!(
            out,
            "tau = {}: {status}; rank drop {}; euler {} vs {}{}",
            p.tau,
            p.rank_drop,
            p.euler_interpolated,
            p.euler_fiber,
            if v.is_empty() { String::new() } else { format!("; VIOLATED: {}", v.join("; ")) }
        );
        points.push(json!({
            "tau": p.tau.to_string(),
            "pure": p.applicable(),
            "weight": p.purity.weight,
            "structure_transfer": p.structure_transfer,
            "rank_drop": p.rank_drop,
            "euler_interpolated": p.euler_interpolated.to_string(),
            "euler_fiber": p.euler_fiber.to_string(),
            "automorphic_type": p.automorphic_type,
            "violations": v,
        }));
    }
    let passed = r.passed();
    out.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    ok(
        params,
        if passed { 0 } else { 1 },
        out,
        json!({
            "passed": passed,
            "generic_euler": r.generic_euler.to_string(),
            "euler_integral": r.euler_integral,
            "automorphic_type_constant": r.at_constant,
            "points": points,
            "violations": r.violations(),
        }),
    )
}
