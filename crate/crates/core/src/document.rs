//! Line-based text format for algebras, bundles and transfer data.
//!
//! ```text
//! # free presentation
//! algebra heisenberg
//! cap = 4
//! gen x : 1
//! gen y : 1
//! gen z : 1
//! d z = x*y
//!
//! # multiplication table
//! algebra sphere
//! cap = 3
//! basis 0 : 1
//! basis 2 : s
//!
//! config main
//! fixed heisenberg
//! cap = 9
//! bundle c1 = 0 weight = 1
//! datum tautological
//! end
//! ```
//!
//! Lines before the first `algebra` header belong to an implicit algebra
//! named `F`. Table stanzas are `basis <deg> : <labels>`,
//! `mul <a> * <b> = <linear combination>` (the mirrored product is filled
//! in with the Koszul sign unless given) and `diff <a> = <linear
//! combination>`. Transfer matrices are `restrict[n] = <row> ; <row>` and
//! `push[n] = ...` with rational entries. Unknown keys are rejected.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{build_free_cdga, build_table_algebra, CochainAlgebra, Element, GeneratorDecl, Polynomial, TableSpec};
use crate::cohomology::{compute_cohomology, CohomologyClass, CohomologyRing};
use crate::equivariant::{
    euler_class, DatumSource, FamilySpec, HamiltonianTransferDatum, ScanConfiguration, TrivialCartanModel,
    WeightedLineBundle,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

/// Arithmetic expression over rationals and names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Number(Scalar),
    Name(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Scalar),
    Name(String),
    Symbol(char),
}

fn tokenize(text: &str, line: usize, offset: usize) -> std::result::Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            // `p/q` is a single rational literal
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            match lit.parse::<Scalar>() {
                Ok(s) => out.push((Token::Number(s), col)),
                Err(_) => return perr(line, col, format!("invalid number `{lit}`")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Name(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            out.push((Token::Symbol(c), col));
            i += 1;
        } else {
            return perr(line, col, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Symbol(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.column();
            match self.tokens.get(self.pos) {
                Some((Token::Number(n), _)) if n.denom() == &1.into() && !n.is_negative() => {
                    let e: u32 = n
                        .numer()
                        .try_into()
                        .or_else(|_| perr(self.line, col, "exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => perr(self.line, col, "expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        let col = self.column();
        match self.tokens.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Token::Number(n)) => {
                self.pos += 1;
                Ok(Expr::Number(n))
            }
            Some(Token::Name(n)) => {
                self.pos += 1;
                Ok(Expr::Name(n))
            }
            Some(Token::Symbol('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return perr(self.line, self.column(), "expected `)`");
                }
                Ok(e)
            }
            Some(Token::Symbol(c)) => perr(self.line, col, format!("unexpected `{c}`")),
            None => perr(self.line, col, "expected an expression"),
        }
    }
}

/// Parses an expression; `offset` is the zero-based column of `text` within
/// its line, for error positions.
pub fn parse_expr_at(text: &str, line: usize, offset: usize) -> std::result::Result<Expr, ParseError> {
    let tokens = tokenize(text, line, offset)?;
    let mut p = ExprParser {
        tokens: &tokens,
        pos: 0,
        line,
        end_column: offset + text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != tokens.len() {
        return perr(line, p.column(), "unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_expr(text: &str) -> std::result::Result<Expr, ParseError> {
    parse_expr_at(text, 1, 0)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Pow(a, e) => write!(f, "{a}^{e}"),
        }
    }
}

/// Value of an expression evaluated inside an algebra. `Zero` is the zero
/// of every degree.
#[derive(Debug, Clone)]
enum Value {
    Zero,
    Elem(Element),
}

/// Evaluates an expression to an element of `algebra`. Names are basis
/// labels. A bare `0` needs `degree_hint`.
pub fn eval_element(algebra: &CochainAlgebra, expr: &Expr, degree_hint: Option<usize>) -> Result<Element> {
    match eval_value(algebra, expr)? {
        Value::Elem(e) => {
            if let Some(d) = degree_hint {
                if e.degree() != d {
                    return Err(Error::InvalidArgument(format!(
                        "`{expr}` has degree {}, expected {d}",
                        e.degree()
                    )));
                }
            }
            Ok(e)
        }
        Value::Zero => match degree_hint {
            Some(d) => algebra.zero(d),
            None => Err(Error::InvalidArgument(format!(
                "cannot infer the degree of `{expr}`"
            ))),
        },
    }
}

fn eval_value(algebra: &CochainAlgebra, expr: &Expr) -> Result<Value> {
    Ok(match expr {
        Expr::Number(n) if n.is_zero() => Value::Zero,
        Expr::Number(n) => Value::Elem(algebra.scale(n, &algebra.unit())),
        Expr::Name(name) => Value::Elem(
            algebra
                .named_element(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown basis label `{name}`")))?,
        ),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (a, b) = (eval_value(algebra, a)?, eval_value(algebra, b)?);
            let negate = matches!(expr, Expr::Sub(..));
            match (a, b) {
                (x, Value::Zero) => x,
                (Value::Zero, Value::Elem(y)) => {
                    Value::Elem(if negate { algebra.scale(&-Scalar::one(), &y) } else { y })
                }
                (Value::Elem(x), Value::Elem(y)) => Value::Elem(if negate {
                    algebra.sub(&x, &y)?
                } else {
                    algebra.add(&x, &y)?
                }),
            }
        }
        Expr::Mul(a, b) => match (eval_value(algebra, a)?, eval_value(algebra, b)?) {
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(algebra.multiply(&x, &y)?),
            _ => Value::Zero,
        },
        Expr::Neg(a) => match eval_value(algebra, a)? {
            Value::Zero => Value::Zero,
            Value::Elem(x) => Value::Elem(algebra.scale(&-Scalar::one(), &x)),
        },
        Expr::Pow(a, e) => {
            let mut acc = Value::Elem(algebra.unit());
            let base = eval_value(algebra, a)?;
            for _ in 0..*e {
                acc = match (acc, &base) {
                    (Value::Elem(x), Value::Elem(y)) => Value::Elem(algebra.multiply(&x, y)?),
                    _ => Value::Zero,
                };
            }
            acc
        }
    })
}

/// Expands an expression into a word polynomial over generator indices.
fn eval_polynomial(expr: &Expr, generators: &HashMap<String, usize>) -> std::result::Result<Polynomial, String> {
    fn go(expr: &Expr, g: &HashMap<String, usize>) -> std::result::Result<Vec<(Scalar, Vec<usize>)>, String> {
        Ok(match expr {
            Expr::Number(n) => vec![(n.clone(), vec![])],
            Expr::Name(n) => vec![(Scalar::one(), vec![*g.get(n).ok_or_else(|| format!("unknown generator `{n}`"))?])],
            Expr::Add(a, b) => {
                let mut t = go(a, g)?;
                t.extend(go(b, g)?);
                t
            }
            Expr::Sub(a, b) => {
                let mut t = go(a, g)?;
                t.extend(go(b, g)?.into_iter().map(|(c, w)| (-c, w)));
                t
            }
            Expr::Neg(a) => go(a, g)?.into_iter().map(|(c, w)| (-c, w)).collect(),
            Expr::Mul(a, b) => {
                let (ta, tb) = (go(a, g)?, go(b, g)?);
                let mut out = Vec::with_capacity(ta.len() * tb.len());
                for (ca, wa) in &ta {
                    for (cb, wb) in &tb {
                        let mut w = wa.clone();
                        w.extend(wb);
                        out.push((ca * cb, w));
                    }
                }
                out
            }
            Expr::Pow(a, e) => {
                let mut acc = vec![(Scalar::one(), vec![])];
                for _ in 0..*e {
                    acc = go(&Expr::Mul(Box::new(Expr::Number(Scalar::one())), a.clone()), g)?
                        .iter()
                        .flat_map(|(cb, wb)| {
                            acc.iter().map(move |(ca, wa)| {
                                let mut w = wa.clone();
                                w.extend(wb);
                                (ca * cb, w)
                            })
                        })
                        .collect();
                }
                acc
            }
        })
    }
    let terms = go(expr, generators)?
        .into_iter()
        .filter(|(c, _)| !c.is_zero())
        .collect();
    Ok(Polynomial { terms })
}

/// Linear combination of table basis labels. Constants count as multiples
/// of the unit label.
fn eval_lincomb(expr: &Expr, unit: &str) -> std::result::Result<BTreeMap<String, Scalar>, String> {
    fn add_into(acc: &mut BTreeMap<String, Scalar>, other: BTreeMap<String, Scalar>, sign: &Scalar) {
        for (k, v) in other {
            *acc.entry(k).or_insert_with(Scalar::zero) += &(&v * sign);
        }
    }
    fn go(expr: &Expr, unit: &str) -> std::result::Result<BTreeMap<String, Scalar>, String> {
        let mut out = BTreeMap::new();
        match expr {
            Expr::Number(n) => {
                if !n.is_zero() {
                    out.insert(unit.to_string(), n.clone());
                }
            }
            Expr::Name(n) => {
                out.insert(n.clone(), Scalar::one());
            }
            Expr::Add(a, b) => {
                add_into(&mut out, go(a, unit)?, &Scalar::one());
                add_into(&mut out, go(b, unit)?, &Scalar::one());
            }
            Expr::Sub(a, b) => {
                add_into(&mut out, go(a, unit)?, &Scalar::one());
                add_into(&mut out, go(b, unit)?, &-Scalar::one());
            }
            Expr::Neg(a) => add_into(&mut out, go(a, unit)?, &-Scalar::one()),
            Expr::Mul(a, b) => {
                let (la, lb) = (go(a, unit)?, go(b, unit)?);
                let scalar = |m: &BTreeMap<String, Scalar>| -> Option<Scalar> {
                    match m.len() {
                        0 => Some(Scalar::zero()),
                        1 => m.get(unit).cloned(),
                        _ => None,
                    }
                };
                if let Some(s) = scalar(&la) {
                    add_into(&mut out, lb, &s);
                } else if let Some(s) = scalar(&lb) {
                    add_into(&mut out, la, &s);
                } else {
                    return Err("structure constants must be linear combinations of basis labels".into());
                }
            }
            Expr::Pow(..) => return Err("powers are not allowed in linear combinations".into()),
        }
        Ok(out.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }
    go(expr, unit)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraBody {
    Free {
        generators: Vec<Located<GeneratorDecl>>,
        differentials: Vec<Located<(String, Expr)>>,
    },
    Table {
        basis: Vec<Located<(usize, Vec<String>)>>,
        products: Vec<Located<(String, String, Expr)>>,
        differentials: Vec<Located<(String, Expr)>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBlock {
    pub name: String,
    pub line: usize,
    pub cap: Option<usize>,
    pub body: Option<AlgebraBody>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatumKind {
    None,
    Tautological,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleLine {
    pub c1: Expr,
    pub weight: i64,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigBlock {
    pub name: String,
    pub line: usize,
    pub fixed: Option<String>,
    pub equivariant_cap: Option<usize>,
    pub bundles: Vec<BundleLine>,
    pub datum: DatumKind,
    pub ambient: Option<String>,
    pub restrict: BTreeMap<usize, Vec<Vector>>,
    pub push: BTreeMap<usize, Vec<Vector>>,
    pub corrupt_push: Option<usize>,
}

impl ConfigBlock {
    fn new(name: String, line: usize) -> Self {
        ConfigBlock {
            name,
            line,
            fixed: None,
            equivariant_cap: None,
            bundles: Vec::new(),
            datum: DatumKind::Tautological,
            ambient: None,
            restrict: BTreeMap::new(),
            push: BTreeMap::new(),
            corrupt_push: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub algebras: Vec<AlgebraBlock>,
    pub configs: Vec<ConfigBlock>,
}

enum Block {
    None,
    Algebra,
    Config,
}

/// Column (1-based) of the first character of `needle` inside `line`,
/// where `needle` is a subslice of `line`.
fn col_of(line: &str, needle: &str) -> usize {
    (needle.as_ptr() as usize).saturating_sub(line.as_ptr() as usize) + 1
}

fn parse_usize(text: &str, line: usize, column: usize, what: &str) -> std::result::Result<usize, ParseError> {
    text.trim()
        .parse()
        .or_else(|_| perr(line, column, format!("expected a nonnegative integer for {what}, found `{}`", text.trim())))
}

fn parse_rows(text: &str, line: usize, raw: &str) -> std::result::Result<Vec<Vector>, ParseError> {
    let mut rows = Vec::new();
    if text.trim().is_empty() {
        return Ok(rows);
    }
    for row in text.split(';') {
        let mut v = Vec::new();
        for entry in row.split_whitespace() {
            match entry.parse::<Scalar>() {
                Ok(s) => v.push(s),
                Err(_) => return perr(line, col_of(raw, entry), format!("invalid matrix entry `{entry}`")),
            }
        }
        rows.push(v);
    }
    Ok(rows)
}

/// Splits `key[n] = rest`.
fn indexed_key<'a>(line_text: &'a str, key: &str) -> Option<(&'a str, &'a str)> {
    let rest = line_text.strip_prefix(key)?.trim_start();
    let rest = rest.strip_prefix('[')?;
    let close = rest.find(']')?;
    let index = &rest[..close];
    let after = rest[close + 1..].trim_start().strip_prefix('=')?;
    Some((index, after))
}

pub fn parse_document(text: &str) -> std::result::Result<Document, ParseError> {
    let mut doc = Document::default();
    let mut block = Block::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (head, rest) = match trimmed.find(char::is_whitespace) {
            Some(p) => (&trimmed[..p], trimmed[p..].trim_start()),
            None => (trimmed, ""),
        };
        let head_col = col_of(raw, trimmed);

        match head {
            "algebra" => {
                if !crate::algebra::presentation::is_identifier(rest) {
                    return perr(line, head_col, "expected `algebra <name>`");
                }
                if doc.algebras.iter().any(|a| a.name == rest) {
                    return perr(line, col_of(raw, rest), format!("duplicate algebra `{rest}`"));
                }
                doc.algebras.push(AlgebraBlock {
                    name: rest.to_string(),
                    line,
                    cap: None,
                    body: None,
                });
                block = Block::Algebra;
                continue;
            }
            "config" => {
                if !crate::algebra::presentation::is_identifier(rest) {
                    return perr(line, head_col, "expected `config <name>`");
                }
                if doc.configs.iter().any(|c| c.name == rest) {
                    return perr(line, col_of(raw, rest), format!("duplicate config `{rest}`"));
                }
                doc.configs.push(ConfigBlock::new(rest.to_string(), line));
                block = Block::Config;
                continue;
            }
            "end" if rest.is_empty() => {
                block = Block::None;
                continue;
            }
            _ => {}
        }

        if matches!(block, Block::None) {
            if is_config_key(head, trimmed) {
                if doc.configs.iter().all(|c| c.name != "default") {
                    doc.configs.push(ConfigBlock::new("default".into(), line));
                }
                block = Block::Config;
                if doc.configs.last().map(|c| c.name.as_str()) != Some("default") {
                    let idx = doc.configs.iter().position(|c| c.name == "default").expect("just added");
                    let c = doc.configs.remove(idx);
                    doc.configs.push(c);
                }
            } else {
                if doc.algebras.iter().all(|a| a.name != "F") {
                    doc.algebras.push(AlgebraBlock {
                        name: "F".into(),
                        line,
                        cap: None,
                        body: None,
                    });
                } else if doc.algebras.last().map(|a| a.name.as_str()) != Some("F") {
                    return perr(line, head_col, "statement outside any block");
                }
                block = Block::Algebra;
            }
        }

        match block {
            Block::Algebra => {
                let alg = doc.algebras.last_mut().expect("algebra block open");
                parse_algebra_line(alg, head, rest, trimmed, raw, line, head_col)?;
            }
            Block::Config => {
                let cfg = doc.configs.last_mut().expect("config block open");
                parse_config_line(cfg, head, rest, trimmed, raw, line, head_col)?;
            }
            Block::None => unreachable!("block chosen above"),
        }
    }
    Ok(doc)
}

fn is_config_key(head: &str, trimmed: &str) -> bool {
    matches!(head, "fixed" | "bundle" | "datum" | "ambient" | "corrupt")
        || trimmed.starts_with("restrict")
        || trimmed.starts_with("push")
}

fn split_assignment<'a>(trimmed: &'a str, key: &str) -> Option<&'a str> {
    let rest = trimmed.strip_prefix(key)?.trim_start();
    Some(rest.strip_prefix('=')?.trim_start())
}

fn parse_algebra_line(
    alg: &mut AlgebraBlock,
    head: &str,
    rest: &str,
    trimmed: &str,
    raw: &str,
    line: usize,
    head_col: usize,
) -> std::result::Result<(), ParseError> {
    if let Some(value) = split_assignment(trimmed, "cap") {
        if alg.cap.is_some() {
            return perr(line, head_col, "cap given twice");
        }
        alg.cap = Some(parse_usize(value, line, col_of(raw, value), "cap")?);
        return Ok(());
    }
    let want_free = matches!(head, "gen" | "d");
    let want_table = matches!(head, "basis" | "mul" | "diff");
    if !want_free && !want_table {
        return perr(line, head_col, format!("unknown key `{head}`"));
    }
    match (&alg.body, want_free) {
        (None, true) => {
            alg.body = Some(AlgebraBody::Free {
                generators: Vec::new(),
                differentials: Vec::new(),
            })
        }
        (None, false) => {
            alg.body = Some(AlgebraBody::Table {
                basis: Vec::new(),
                products: Vec::new(),
                differentials: Vec::new(),
            })
        }
        (Some(AlgebraBody::Free { .. }), false) | (Some(AlgebraBody::Table { .. }), true) => {
            return perr(
                line,
                head_col,
                format!("`{head}` mixes free and table presentations"),
            )
        }
        _ => {}
    }
    match alg.body.as_mut().expect("set above") {
        AlgebraBody::Free {
            generators,
            differentials,
        } => match head {
            "gen" => {
                let Some((name, deg)) = rest.split_once(':') else {
                    return perr(line, head_col, "expected `gen <name> : <degree>`");
                };
                let name = name.trim();
                let degree = parse_usize(deg, line, col_of(raw, deg.trim()), "degree")?;
                generators.push(Located {
                    value: GeneratorDecl::new(name, degree),
                    line,
                });
            }
            _ => {
                let Some((name, poly)) = rest.split_once('=') else {
                    return perr(line, head_col, "expected `d <name> = <polynomial>`");
                };
                let expr = parse_expr_at(poly, line, col_of(raw, poly) - 1)?;
                differentials.push(Located {
                    value: (name.trim().to_string(), expr),
                    line,
                });
            }
        },
        AlgebraBody::Table {
            basis,
            products,
            differentials,
        } => match head {
            "basis" => {
                let Some((deg, labels)) = rest.split_once(':') else {
                    return perr(line, head_col, "expected `basis <degree> : <labels>`");
                };
                let degree = parse_usize(deg, line, col_of(raw, deg.trim()), "degree")?;
                basis.push(Located {
                    value: (degree, labels.split_whitespace().map(str::to_string).collect()),
                    line,
                });
            }
            "mul" => {
                let Some((lhs, rhs)) = rest.split_once('=') else {
                    return perr(line, head_col, "expected `mul <a> * <b> = <combination>`");
                };
                let Some((a, b)) = lhs.split_once('*') else {
                    return perr(line, col_of(raw, lhs), "expected `<a> * <b>`");
                };
                let expr = parse_expr_at(rhs, line, col_of(raw, rhs) - 1)?;
                products.push(Located {
                    value: (a.trim().to_string(), b.trim().to_string(), expr),
                    line,
                });
            }
            _ => {
                let Some((name, rhs)) = rest.split_once('=') else {
                    return perr(line, head_col, "expected `diff <a> = <combination>`");
                };
                let expr = parse_expr_at(rhs, line, col_of(raw, rhs) - 1)?;
                differentials.push(Located {
                    value: (name.trim().to_string(), expr),
                    line,
                });
            }
        },
    }
    Ok(())
}

fn parse_config_line(
    cfg: &mut ConfigBlock,
    head: &str,
    rest: &str,
    trimmed: &str,
    raw: &str,
    line: usize,
    head_col: usize,
) -> std::result::Result<(), ParseError> {
    if let Some((index, value)) = indexed_key(trimmed, "restrict") {
        let n = parse_usize(index, line, col_of(raw, index), "degree")?;
        if cfg.restrict.insert(n, parse_rows(value, line, raw)?).is_some() {
            return perr(line, head_col, format!("restrict[{n}] given twice"));
        }
        return Ok(());
    }
    if let Some((index, value)) = indexed_key(trimmed, "push") {
        let n = parse_usize(index, line, col_of(raw, index), "degree")?;
        if cfg.push.insert(n, parse_rows(value, line, raw)?).is_some() {
            return perr(line, head_col, format!("push[{n}] given twice"));
        }
        return Ok(());
    }
    if let Some(value) = split_assignment(trimmed, "cap") {
        cfg.equivariant_cap = Some(parse_usize(value, line, col_of(raw, value), "cap")?);
        return Ok(());
    }
    match head {
        "fixed" => cfg.fixed = Some(rest.to_string()),
        "ambient" => cfg.ambient = Some(rest.to_string()),
        "datum" => {
            cfg.datum = match rest {
                "none" => DatumKind::None,
                "tautological" => DatumKind::Tautological,
                "explicit" => DatumKind::Explicit,
                _ => return perr(line, col_of(raw, rest), format!("unknown datum kind `{rest}`")),
            }
        }
        "corrupt" => {
            let Some(degree) = rest.strip_prefix("push") else {
                return perr(line, col_of(raw, rest), "expected `corrupt push <degree>`");
            };
            cfg.corrupt_push = Some(parse_usize(degree, line, col_of(raw, degree.trim()), "degree")?);
        }
        "bundle" => {
            let Some(body) = split_assignment(rest, "c1") else {
                return perr(line, col_of(raw, rest), "expected `bundle c1 = <class> weight = <integer>`");
            };
            let Some(split) = body.rfind("weight") else {
                return perr(line, col_of(raw, body), "missing `weight = <integer>`");
            };
            let (class_text, weight_text) = body.split_at(split);
            let Some(weight_value) = split_assignment(weight_text, "weight") else {
                return perr(line, col_of(raw, weight_text), "expected `weight = <integer>`");
            };
            let weight = weight_value.trim().parse::<i64>().or_else(|_| {
                perr(line, col_of(raw, weight_value), format!("invalid weight `{}`", weight_value.trim()))
            })?;
            let c1 = parse_expr_at(class_text, line, col_of(raw, class_text) - 1)?;
            cfg.bundles.push(BundleLine { c1, weight, line });
        }
        _ => return perr(line, head_col, format!("unknown key `{head}`")),
    }
    Ok(())
}

impl Document {
    pub fn algebra_block(&self, name: Option<&str>) -> Result<&AlgebraBlock> {
        match name {
            Some(n) => self
                .algebras
                .iter()
                .find(|a| a.name == n)
                .ok_or_else(|| Error::InvalidArgument(format!("no algebra named `{n}`"))),
            None => self
                .algebras
                .first()
                .ok_or_else(|| Error::InvalidArgument("the document defines no algebra".into())),
        }
    }

    pub fn build_algebra(&self, name: Option<&str>) -> Result<CochainAlgebra> {
        build_block(self.algebra_block(name)?)
    }

    pub fn config(&self, name: Option<&str>) -> Result<&ConfigBlock> {
        match name {
            Some(n) => self
                .configs
                .iter()
                .find(|c| c.name == n)
                .ok_or_else(|| Error::InvalidArgument(format!("no config named `{n}`"))),
            None => self
                .configs
                .first()
                .ok_or_else(|| Error::InvalidArgument("the document defines no config".into())),
        }
    }
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::InvalidAlgebra(m) => Error::InvalidAlgebra(format!("line {line}: {m}")),
        Error::InvalidArgument(m) => Error::InvalidAlgebra(format!("line {line}: {m}")),
        other => other,
    }
}

pub fn build_block(block: &AlgebraBlock) -> Result<CochainAlgebra> {
    let cap = block
        .cap
        .ok_or_else(|| Error::InvalidAlgebra(format!("algebra `{}` has no `cap = N` line", block.name)))?;
    match &block.body {
        None => build_table_algebra(TableSpec::new(cap, vec![vec!["1".into()]])),
        Some(AlgebraBody::Free {
            generators,
            differentials,
        }) => {
            let gens: Vec<GeneratorDecl> = generators.iter().map(|g| g.value.clone()).collect();
            let index: HashMap<String, usize> = gens.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
            let mut polys = vec![Polynomial::zero(); gens.len()];
            let mut seen = vec![false; gens.len()];
            for d in differentials {
                let (name, expr) = &d.value;
                let k = *index
                    .get(name)
                    .ok_or_else(|| Error::InvalidGenerator(format!("line {}: unknown generator `{name}`", d.line)))?;
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::InvalidGenerator(format!(
                        "line {}: differential of `{name}` given twice",
                        d.line
                    )));
                }
                polys[k] = eval_polynomial(expr, &index)
                    .map_err(|m| Error::InvalidGenerator(format!("line {}: {m}", d.line)))?;
            }
            build_free_cdga(gens, polys, cap)
        }
        Some(AlgebraBody::Table {
            basis,
            products,
            differentials,
        }) => {
            let mut labels: Vec<Vec<String>> = vec![Vec::new(); cap + 1];
            for b in basis {
                let (deg, names) = &b.value;
                if *deg > cap {
                    return Err(Error::InvalidAlgebra(format!(
                        "line {}: basis in degree {deg} above the cap {cap}",
                        b.line
                    )));
                }
                labels[*deg].extend(names.iter().cloned());
            }
            let unit = labels[0]
                .first()
                .cloned()
                .ok_or_else(|| Error::InvalidAlgebra("degree 0 needs a unit basis vector".into()))?;
            let position: HashMap<&str, (usize, usize)> = labels
                .iter()
                .enumerate()
                .flat_map(|(n, ls)| ls.iter().enumerate().map(move |(i, l)| (l.as_str(), (n, i))))
                .collect();
            let lookup = |name: &str, line: usize| -> Result<(usize, usize)> {
                position
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::InvalidAlgebra(format!("line {line}: unknown basis label `{name}`")))
            };
            let to_vector = |expr: &Expr, degree: usize, line: usize| -> Result<Vector> {
                let comb = eval_lincomb(expr, &unit).map_err(|m| Error::InvalidAlgebra(format!("line {line}: {m}")))?;
                let mut v = linalg::zero_vector(labels.get(degree).map_or(0, Vec::len));
                for (name, c) in comb {
                    let (n, i) = lookup(&name, line)?;
                    if n != degree {
                        return Err(Error::InvalidAlgebra(format!(
                            "line {line}: `{name}` has degree {n}, expected {degree}"
                        )));
                    }
                    v[i] = c;
                }
                Ok(v)
            };

            let mut spec = TableSpec::new(cap, labels.clone());
            let mut given = BTreeMap::new();
            for p in products {
                let (a, b, expr) = &p.value;
                let (ra, rb) = (lookup(a, p.line)?, lookup(b, p.line)?);
                let degree = ra.0 + rb.0;
                if degree > cap {
                    return Err(Error::CapOverflow { degree, cap });
                }
                let v = to_vector(expr, degree, p.line)?;
                if given.insert((ra, rb), v).is_some() {
                    return Err(Error::InvalidAlgebra(format!("line {}: product {a} * {b} given twice", p.line)));
                }
            }
            for (&(ra, rb), v) in &given {
                spec.products.insert((ra, rb), v.clone());
                if !given.contains_key(&(rb, ra)) {
                    let sign = Scalar::sign(ra.0 * rb.0);
                    spec.products.insert((rb, ra), linalg::scale(&sign, v));
                }
            }

            let mut columns: Vec<Vec<Option<Vector>>> = labels.iter().map(|ls| vec![None; ls.len()]).collect();
            for d in differentials {
                let (name, expr) = &d.value;
                let (n, i) = lookup(name, d.line)?;
                if n >= cap {
                    return Err(Error::InvalidAlgebra(format!(
                        "line {}: differential of a top-degree element",
                        d.line
                    )));
                }
                columns[n][i] = Some(to_vector(expr, n + 1, d.line)?);
            }
            spec.differentials = (0..cap)
                .map(|n| {
                    let cols: Vec<Vector> = columns[n]
                        .iter()
                        .map(|c| c.clone().unwrap_or_else(|| linalg::zero_vector(labels[n + 1].len())))
                        .collect();
                    Matrix::from_columns(&cols, labels[n + 1].len())
                })
                .collect::<Result<Vec<_>>>()?;
            build_table_algebra(spec).map_err(|e| located(block.line, e))
        }
    }
}

/// Evaluates a class expression in `ring`: the expression must evaluate to a
/// cocycle of the underlying algebra.
pub fn eval_class(ring: &CohomologyRing, expr: &Expr, degree_hint: Option<usize>) -> Result<CohomologyClass> {
    let e = eval_element(ring.algebra(), expr, degree_hint)?;
    ring.project(&e)
}

pub fn parse_class(ring: &CohomologyRing, text: &str, degree_hint: Option<usize>) -> Result<CohomologyClass> {
    eval_class(ring, &parse_expr(text)?, degree_hint)
}

/// Line bundles of a config, with Chern classes taken in `base`.
pub fn bundles_in(base: &CohomologyRing, lines: &[BundleLine]) -> Result<Vec<WeightedLineBundle>> {
    lines
        .iter()
        .map(|b| {
            let c1 = eval_class(base, &b.c1, Some(2)).map_err(|e| {
                Error::InvalidArgument(format!("line {}: first Chern class: {e}", b.line))
            })?;
            Ok(WeightedLineBundle::new(c1, b.weight))
        })
        .collect()
}

fn datum_matrices(
    given: &BTreeMap<usize, Vec<Vector>>,
    key: &str,
    degrees: usize,
    shape: impl Fn(usize) -> Result<(usize, usize)>,
) -> Result<Vec<Matrix>> {
    if let Some(&n) = given.keys().find(|&&n| n >= degrees) {
        return Err(Error::DatumMismatch(format!(
            "{key}[{n}] is outside the trusted range of the datum"
        )));
    }
    (0..degrees)
        .map(|n| {
            let (rows, cols) = shape(n)?;
            match given.get(&n) {
                Some(r) if r.len() == rows => Matrix::from_rows(r.clone(), cols)
                    .map_err(|e| Error::DatumMismatch(format!("{key}[{n}]: {e}"))),
                Some(r) => Err(Error::DatumMismatch(format!(
                    "{key}[{n}] must have {rows} rows, got {}",
                    r.len()
                ))),
                None if rows == 0 || cols == 0 => Ok(Matrix::zeros(rows, cols)),
                None => Err(Error::DatumMismatch(format!("{key}[{n}] ({rows}x{cols}) is missing"))),
            }
        })
        .collect()
}

impl Document {
    /// Cartan model, line bundles and transfer datum of a config block.
    /// Without a `fixed` line the document's only algebra is used.
    pub fn configuration(&self, cfg: &ConfigBlock) -> Result<ScanConfiguration> {
        let fixed_name = match (&cfg.fixed, self.algebras.as_slice()) {
            (Some(name), _) => name.as_str(),
            (None, [only]) => only.name.as_str(),
            (None, _) => {
                return Err(Error::InvalidArgument(format!(
                    "config `{}` names no fixed algebra",
                    cfg.name
                )))
            }
        };
        let fixed = self.build_algebra(Some(fixed_name))?;
        let cap = cfg.equivariant_cap.unwrap_or(fixed.cap()).max(fixed.cap());
        let model = Arc::new(TrivialCartanModel::new(&fixed, cap)?);
        let bundles = bundles_in(model.base_ring(), &cfg.bundles)?;
        if cfg.datum != DatumKind::Explicit && (cfg.ambient.is_some() || !cfg.restrict.is_empty() || !cfg.push.is_empty()) {
            return Err(Error::InvalidArgument(format!(
                "config `{}`: ambient and matrices need `datum explicit`",
                cfg.name
            )));
        }
        let datum = match cfg.datum {
            DatumKind::None => DatumSource::None,
            DatumKind::Tautological => match cfg.corrupt_push {
                Some(push_degree) => DatumSource::CorruptedTautological { push_degree },
                None => DatumSource::Tautological,
            },
            DatumKind::Explicit => {
                let mut d = self.explicit_datum(cfg, &model, &bundles)?;
                if let Some(n) = cfg.corrupt_push {
                    d = d.with_push_zeroed(n)?;
                }
                DatumSource::Explicit(Box::new(d))
            }
        };
        Ok(ScanConfiguration {
            name: cfg.name.clone(),
            model,
            bundles,
            datum,
        })
    }

    fn explicit_datum(
        &self,
        cfg: &ConfigBlock,
        model: &TrivialCartanModel,
        bundles: &[WeightedLineBundle],
    ) -> Result<HamiltonianTransferDatum> {
        let ambient_name = cfg
            .ambient
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument(format!("config `{}`: explicit datum needs `ambient`", cfg.name)))?;
        let ambient = compute_cohomology(Arc::new(self.build_algebra(Some(ambient_name))?))?;
        let chi = euler_class(model, bundles)?;
        let fixed = model.ring().clone();
        let trust = ambient.trusted_degree().min(fixed.trusted_degree());
        let shift = chi.class.degree();
        let restrict = datum_matrices(&cfg.restrict, "restrict", trust + 1, |n| {
            Ok((fixed.betti(n)?, ambient.betti(n)?))
        })?;
        let push_degrees = if shift <= trust { trust - shift + 1 } else { 0 };
        let push = datum_matrices(&cfg.push, "push", push_degrees, |n| {
            Ok((ambient.betti(n + shift)?, fixed.betti(n)?))
        })?;
        HamiltonianTransferDatum::new(ambient, fixed, chi, restrict, push)
    }

    /// Every config block, in order.
    pub fn family(&self) -> Result<FamilySpec> {
        let configurations = self
            .configs
            .iter()
            .map(|c| self.configuration(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilySpec { configurations })
    }
}
