//! The `wdrep/1` text format: a JSON document with a header naming the
//! residue data and the kind of object, and a body holding matrices as
//! nested arrays of exact scalar strings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::pseudo::PseudoRep;
use crate::scalars::{
    canonicalize_qmonomial, parse_ground, parse_ratfunc, Field, GroundField, GroundScalar, ParseError, QMonomial, RatFunc,
    Rational, ResidueParams,
};
use crate::structure::{lift_level, TwistField};
use crate::wd::{
    Check, FamilyTwist, FamilyWD, IrredRep, MatrixWD, SpBlock, StructuredFamilyWD, StructuredRep, StructuredWD, Twist, WdRep,
};

pub const FORMAT: &str = "wdrep/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at {location}: {msg}")]
    Syntax { location: String, msg: String },
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("invariant violation: {summary}")]
    InvariantViolation { summary: String, diagnostics: Vec<Check> },
    #[error(transparent)]
    Core(#[from] crate::Error),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn syntax(location: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Syntax {
        location: location.into(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Matrix,
    Structured,
    Family,
    StructuredFamily,
    Pseudo,
    Report,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format: String,
    pub ell: u64,
    pub f: u32,
    pub q: u64,
    pub cyclo_level: u32,
    pub kind: Kind,
}

impl Header {
    pub fn new(params: &ResidueParams, kind: Kind) -> Self {
        Header {
            format: FORMAT.into(),
            ell: params.ell,
            f: params.f,
            q: params.q,
            cyclo_level: params.level,
            kind,
        }
    }

    pub fn params(&self) -> IoResult<ResidueParams> {
        if self.format != FORMAT {
            return Err(IoError::HeaderMismatch(format!("format tag {:?}, expected {FORMAT:?}", self.format)));
        }
        ResidueParams::with_q(self.ell, self.f, self.q, self.cyclo_level).map_err(|e| IoError::HeaderMismatch(e.to_string()))
    }
}

type RawMatrix = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepBody {
    pub inertia: Vec<RawMatrix>,
    pub frobenius: RawMatrix,
    pub monodromy: RawMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QMonomialBody {
    pub sign: i8,
    pub unit: String,
    pub zeta: u32,
    pub half: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyTwistBody {
    pub factor: String,
    pub constant: QMonomialBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockBody<T> {
    pub t: usize,
    pub twist: T,
    pub inertia: Vec<RawMatrix>,
    pub phi0: RawMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredBody<T> {
    pub n_inertia: usize,
    pub blocks: Vec<BlockBody<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coefficients {
    Ground,
    Family,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoBody {
    pub coefficients: Coefficients,
    pub parts: Vec<RepBody>,
}

/// The output of a command, kept as a document so it can be diffed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub exit_code: u8,
    pub result: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    header: Header,
    body: serde_json::Value,
}

/// Every object the format carries.
#[derive(Debug, Clone)]
pub enum Object {
    Matrix(MatrixWD),
    Family(FamilyWD),
    Structured(StructuredWD),
    StructuredFamily(StructuredFamilyWD),
    Pseudo(PseudoRep<GroundScalar>),
    PseudoFamily(PseudoRep<RatFunc>),
    Report(ResidueParams, Report),
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Matrix(_) => Kind::Matrix,
            Object::Family(_) => Kind::Family,
            Object::Structured(_) => Kind::Structured,
            Object::StructuredFamily(_) => Kind::StructuredFamily,
            Object::Pseudo(_) | Object::PseudoFamily(_) => Kind::Pseudo,
            Object::Report(..) => Kind::Report,
        }
    }

    pub fn params(&self) -> ResidueParams {
        match self {
            Object::Matrix(v) => v.params,
            Object::Family(v) => v.params,
            Object::Structured(s) => s.params,
            Object::StructuredFamily(s) => s.params,
            Object::Pseudo(t) => t.params(),
            Object::PseudoFamily(t) => t.params(),
            Object::Report(p, _) => *p,
        }
    }

    /// The same object at cyclotomic level `N * mult`.
    pub fn lift_level(&self, mult: u32) -> Object {
        if mult <= 1 {
            return self.clone();
        }
        match self {
            Object::Matrix(v) => Object::Matrix(lift_level(v, mult)),
            Object::Family(v) => Object::Family(lift_level(v, mult)),
            Object::Structured(s) => Object::Structured(lift_structured(s, mult, |t, _| t.lift_to_level(t.level * mult))),
            Object::StructuredFamily(s) => Object::StructuredFamily(lift_structured(s, mult, |t, field| {
                FamilyTwist::new(t.factor.lift(field), t.constant.lift_to_level(t.constant.level * mult))
            })),
            Object::Pseudo(t) => Object::Pseudo(lift_pseudo(t, mult)),
            Object::PseudoFamily(t) => Object::PseudoFamily(lift_pseudo(t, mult)),
            Object::Report(p, r) => Object::Report(p.at_level(p.level * mult), r.clone()),
        }
    }
}

fn lift_structured<Tw: Twist>(s: &StructuredRep<Tw>, mult: u32, tw: impl Fn(&Tw, &GroundField) -> Tw) -> StructuredRep<Tw> {
    let params = s.params.at_level(s.params.level * mult);
    let field = GroundField::new(&params);
    let m = |x: &Matrix<GroundScalar>| x.map(&field, |c| c.lift_to(&field));
    let blocks = s
        .blocks
        .iter()
        .map(|b| SpBlock {
            t: b.t,
            rep: IrredRep {
                twist: tw(&b.rep.twist, &field),
                inertia: b.rep.inertia.iter().map(m).collect(),
                phi0: m(&b.rep.phi0),
            },
        })
        .collect();
    StructuredRep {
        params,
        n_inertia: s.n_inertia,
        blocks,
    }
}

fn lift_pseudo<F: TwistField>(t: &PseudoRep<F>, mult: u32) -> PseudoRep<F> {
    let parts: Vec<WdRep<F>> = t.parts().iter().map(|p| lift_level(p, mult)).collect();
    match t.backing() {
        crate::pseudo::Backing::Stored(_) => PseudoRep::stored(parts.into_iter().next().unwrap()),
        crate::pseudo::Backing::Sum(_) => PseudoRep::sum(parts).expect("lifting preserves compatibility"),
    }
}

/// Scalars that have a canonical string form.
pub trait TextScalar: Field<Ctx = GroundField> {
    fn parse_text(s: &str, field: &GroundField) -> Result<Self, ParseError>;
}

impl TextScalar for GroundScalar {
    fn parse_text(s: &str, field: &GroundField) -> Result<Self, ParseError> {
        parse_ground(s, field)
    }
}

impl TextScalar for RatFunc {
    fn parse_text(s: &str, field: &GroundField) -> Result<Self, ParseError> {
        parse_ratfunc(s, field)
    }
}

fn read_matrix<F: TextScalar>(raw: &RawMatrix, field: &GroundField, loc: &str) -> IoResult<Matrix<F>> {
    let mut rows = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        if r.len() != raw[0].len() {
            return Err(syntax(format!("{loc}[{i}]"), format!("row has {} entries, expected {}", r.len(), raw[0].len())));
        }
        let mut row = Vec::with_capacity(r.len());
        for (j, s) in r.iter().enumerate() {
            let x = F::parse_text(s, field)
                .map_err(|e| syntax(format!("{loc}[{i}][{j}], character {}", e.pos), e.msg))?;
            row.push(x);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Matrix::zero(field, 0, 0));
    }
    Matrix::from_rows(field, rows).map_err(|e| syntax(loc, e.to_string()))
}

fn write_matrix<F: Field>(m: &Matrix<F>) -> RawMatrix {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn square(m_rows: usize, m_cols: usize, n: usize, loc: &str) -> IoResult<()> {
    if m_rows != n || m_cols != n {
        return Err(syntax(loc, format!("expected a {n}x{n} matrix, found {m_rows}x{m_cols}")));
    }
    Ok(())
}

fn read_rep<F: TextScalar>(b: &RepBody, params: ResidueParams, loc: &str) -> IoResult<WdRep<F>> {
    let field = GroundField::new(&params);
    let frobenius: Matrix<F> = read_matrix(&b.frobenius, &field, &format!("{loc}.frobenius"))?;
    let n = frobenius.rows();
    square(frobenius.rows(), frobenius.cols(), n, &format!("{loc}.frobenius"))?;
    let monodromy: Matrix<F> = read_matrix(&b.monodromy, &field, &format!("{loc}.monodromy"))?;
    square(monodromy.rows(), monodromy.cols(), n, &format!("{loc}.monodromy"))?;
    let mut inertia = Vec::with_capacity(b.inertia.len());
    for (j, g) in b.inertia.iter().enumerate() {
        let l = format!("{loc}.inertia[{j}]");
        let m: Matrix<F> = read_matrix(g, &field, &l)?;
        square(m.rows(), m.cols(), n, &l)?;
        inertia.push(m);
    }
    let v = WdRep::new(params, inertia, frobenius, monodromy);
    let d = v.validate();
    if !d.is_valid() {
        let names: Vec<String> = d.failures().iter().map(|c| c.name.clone()).collect();
        return Err(IoError::InvariantViolation {
            summary: format!("{loc} fails {}", names.join(", ")),
            diagnostics: d.checks,
        });
    }
    Ok(v)
}

fn write_rep<F: Field<Ctx = GroundField>>(v: &WdRep<F>) -> RepBody {
    RepBody {
        inertia: v.inertia.iter().map(write_matrix).collect(),
        frobenius: write_matrix(&v.frobenius),
        monodromy: write_matrix(&v.monodromy),
    }
}

fn read_qmonomial(b: &QMonomialBody, params: &ResidueParams, loc: &str) -> IoResult<QMonomial> {
    let unit: Rational = b.unit.trim().parse().map_err(|_| syntax(format!("{loc}.unit"), "not a rational number"))?;
    if b.sign != 1 && b.sign != -1 {
        return Err(syntax(format!("{loc}.sign"), "sign must be 1 or -1"));
    }
    let r = if b.sign < 0 { -unit } else { unit };
    Ok(canonicalize_qmonomial(&r, b.zeta as i64, b.half, params)?)
}

fn write_qmonomial(m: &QMonomial) -> QMonomialBody {
    QMonomialBody {
        sign: m.sign,
        unit: m.unit.to_string(),
        zeta: m.zeta,
        half: m.half,
    }
}

fn invariant(summary: String, diagnostics: Vec<Check>) -> IoError {
    IoError::InvariantViolation { summary, diagnostics }
}

fn read_structured<T, Tw: Twist>(
    b: &StructuredBody<T>,
    params: ResidueParams,
    twist: impl Fn(&T, &str) -> IoResult<Tw>,
) -> IoResult<StructuredRep<Tw>> {
    let field = GroundField::new(&params);
    let mut blocks = Vec::with_capacity(b.blocks.len());
    for (i, blk) in b.blocks.iter().enumerate() {
        let loc = format!("body.blocks[{i}]");
        let phi0: Matrix<GroundScalar> = read_matrix(&blk.phi0, &field, &format!("{loc}.phi0"))?;
        let n = phi0.rows();
        square(phi0.rows(), phi0.cols(), n, &format!("{loc}.phi0"))?;
        let mut inertia = Vec::with_capacity(blk.inertia.len());
        for (j, g) in blk.inertia.iter().enumerate() {
            let l = format!("{loc}.inertia[{j}]");
            let m: Matrix<GroundScalar> = read_matrix(g, &field, &l)?;
            square(m.rows(), m.cols(), n, &l)?;
            inertia.push(m);
        }
        let rep = IrredRep {
            twist: twist(&blk.twist, &format!("{loc}.twist"))?,
            inertia,
            phi0,
        };
        let ok = rep.check(crate::linalg::DEFAULT_CAP).unwrap_or(false);
        if !ok || n == 0 {
            return Err(invariant(
                format!("{loc} is not an absolutely irreducible finite-image factor"),
                vec![Check {
                    name: "irreducible factor".into(),
                    passed: false,
                    detail: loc,
                }],
            ));
        }
        blocks.push(SpBlock { t: blk.t, rep });
    }
    let s = StructuredRep::new(params, b.n_inertia, blocks).map_err(|e| invariant(e.to_string(), Vec::new()))?;
    let d = s.to_matrix()?.validate();
    if !d.is_valid() {
        let names: Vec<String> = d.failures().iter().map(|c| c.name.clone()).collect();
        return Err(invariant(format!("block sum fails {}", names.join(", ")), d.checks));
    }
    Ok(s)
}

fn write_structured<T, Tw: Twist>(s: &StructuredRep<Tw>, twist: impl Fn(&Tw) -> T) -> StructuredBody<T> {
    StructuredBody {
        n_inertia: s.n_inertia,
        blocks: s
            .blocks
            .iter()
            .map(|b| BlockBody {
                t: b.t,
                twist: twist(&b.rep.twist),
                inertia: b.rep.inertia.iter().map(write_matrix).collect(),
                phi0: write_matrix(&b.rep.phi0),
            })
            .collect(),
    }
}

fn body<T: for<'de> Deserialize<'de>>(v: serde_json::Value) -> IoResult<T> {
    serde_json::from_value(v).map_err(|e| syntax("body", e.to_string()))
}

/// Parse a document and validate the object it carries.
pub fn parse(text: &str) -> IoResult<Object> {
    let raw: RawDocument = serde_json::from_str(text)
        .map_err(|e| syntax(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let params = raw.header.params()?;
    let field = GroundField::new(&params);
    Ok(match raw.header.kind {
        Kind::Matrix => Object::Matrix(read_rep(&body(raw.body)?, params, "body")?),
        Kind::Family => Object::Family(read_rep(&body(raw.body)?, params, "body")?),
        Kind::Structured => {
            let b: StructuredBody<QMonomialBody> = body(raw.body)?;
            Object::Structured(read_structured(&b, params, |t, loc| read_qmonomial(t, &params, loc))?)
        }
        Kind::StructuredFamily => {
            let b: StructuredBody<FamilyTwistBody> = body(raw.body)?;
            Object::StructuredFamily(read_structured(&b, params, |t, loc| {
                let factor = parse_ratfunc(&t.factor, &field)
                    .map_err(|e| syntax(format!("{loc}.factor, character {}", e.pos), e.msg))?;
                if factor.is_zero() {
                    return Err(invariant(format!("{loc}: a character cannot vanish identically"), Vec::new()));
                }
                Ok(FamilyTwist::new(factor, read_qmonomial(&t.constant, &params, &format!("{loc}.constant"))?))
            })?)
        }
        Kind::Pseudo => {
            let b: PseudoBody = body(raw.body)?;
            if b.parts.is_empty() {
                return Err(syntax("body.parts", "a pseudorepresentation needs at least one part"));
            }
            match b.coefficients {
                Coefficients::Ground => Object::Pseudo(read_pseudo(&b, params)?),
                Coefficients::Family => Object::PseudoFamily(read_pseudo(&b, params)?),
            }
        }
        Kind::Report => Object::Report(params, body(raw.body)?),
    })
}

fn read_pseudo<F: TextScalar>(b: &PseudoBody, params: ResidueParams) -> IoResult<PseudoRep<F>> {
    let parts: Vec<WdRep<F>> = b
        .parts
        .iter()
        .enumerate()
        .map(|(i, p)| read_rep(p, params, &format!("body.parts[{i}]")))
        .collect::<IoResult<_>>()?;
    if parts.len() == 1 {
        Ok(PseudoRep::stored(parts.into_iter().next().unwrap()))
    } else {
        Ok(PseudoRep::sum(parts)?)
    }
}

fn write_pseudo<F: Field<Ctx = GroundField>>(t: &PseudoRep<F>, coefficients: Coefficients) -> PseudoBody {
    PseudoBody {
        coefficients,
        parts: t.parts().iter().map(write_rep).collect(),
    }
}

/// Canonical text of an object (pretty-printed JSON, trailing newline).
pub fn print(obj: &Object) -> String {
    let header = Header::new(&obj.params(), obj.kind());
    let to = |x: serde_json::Result<serde_json::Value>| x.expect("bodies serialize");
    let body = match obj {
        Object::Matrix(v) => to(serde_json::to_value(write_rep(v))),
        Object::Family(v) => to(serde_json::to_value(write_rep(v))),
        Object::Structured(s) => to(serde_json::to_value(write_structured(s, write_qmonomial))),
        Object::StructuredFamily(s) => to(serde_json::to_value(write_structured(s, |t: &FamilyTwist| FamilyTwistBody {
            factor: t.factor.to_string(),
            constant: write_qmonomial(&t.constant),
        }))),
        Object::Pseudo(t) => to(serde_json::to_value(write_pseudo(t, Coefficients::Ground))),
        Object::PseudoFamily(t) => to(serde_json::to_value(write_pseudo(t, Coefficients::Family))),
        Object::Report(_, r) => to(serde_json::to_value(r)),
    };
    let mut s = serde_json::to_string_pretty(&RawDocument { header, body }).expect("documents serialize");
    s.push('\n');
    s
}

/// A report document for `command`.
pub fn report(params: &ResidueParams, command: &str, exit_code: u8, result: serde_json::Value) -> Object {
    Object::Report(
        *params,
        Report {
            command: command.into(),
            exit_code,
            result,
        },
    )
}

/// Parse one scalar at the document's level.
pub fn parse_scalar(text: &str, params: &ResidueParams) -> IoResult<GroundScalar> {
    parse_ground(text, &GroundField::new(params)).map_err(|e| syntax(format!("scalar {text:?}, character {}", e.pos), e.msg))
}
