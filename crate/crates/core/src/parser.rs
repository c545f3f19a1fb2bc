//! Text syntax for symbols and operator systems.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | base ('^' uint)?
//! base     := 'i' | rational | variable | '(' expr ')'
//! variable := ('D' | 'xi') uint
//! rational := uint ('/' uint)? | decimal
//! ```
//!
//! `Dk` and `xik` both denote the coordinate `xi_k` (1-based in text).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::gaussian::{fmt_rational, GaussianRational, Rational};
use crate::poly::{MultiIndex, OperatorSystem, Polynomial, WeightVector};

const MAX_EXPONENT: u32 = 255;
const MAX_DEGREE: u32 = 512;
const MAX_TERMS: usize = 200_000;
const MAX_DIM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedToken,
    UnknownVariable,
    NonIntegerExponent,
    DimensionMismatch,
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {:?}: {}", self.line, self.column, self.kind, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

type PResult<T> = std::result::Result<T, ParseDiagnostic>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(Rational),
    Var(usize),
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
}

struct Source<'a> {
    text: &'a str,
    base: usize,
    full: &'a str,
}

impl Source<'_> {
    fn diag(&self, local: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseDiagnostic {
        let mut offset = self.base + local;
        if offset >= self.full.len() {
            offset = self.full.len().saturating_sub(1);
        }
        while offset > 0 && !self.full.is_char_boundary(offset) {
            offset -= 1;
        }
        let before = &self.full[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        ParseDiagnostic { offset, line, column, kind, message: message.into() }
    }
}

fn lex(src: &Source<'_>) -> PResult<Vec<Token>> {
    let bytes = src.text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let simple = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(Token { tok: t, start });
            pos += 1;
            continue;
        }
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if b.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let int_part = &src.text[start..pos];
            if pos < bytes.len() && bytes[pos] == b'.' {
                let frac_start = pos + 1;
                pos = frac_start;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == frac_start {
                    return Err(src.diag(start, ParseErrorKind::UnexpectedToken, "decimal point must be followed by digits"));
                }
                let frac = &src.text[frac_start..pos];
                let num: BigInt = format!("{int_part}{frac}").parse().expect("digits");
                let den = BigInt::from(10).pow(frac.len() as u32);
                out.push(Token { tok: Tok::Decimal(Rational::new(num, den)), start });
            } else {
                out.push(Token { tok: Tok::Int(int_part.parse().expect("digits")), start });
            }
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                return Err(src.diag(pos, ParseErrorKind::UnexpectedToken, "scientific notation is not supported"));
            }
            continue;
        }
        if b == b'D' || (b == b'x' && bytes.get(pos + 1) == Some(&b'i')) {
            pos += if b == b'D' { 1 } else { 2 };
            let ds = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if ds == pos {
                return Err(src.diag(start, ParseErrorKind::UnknownVariable, "variable name must be followed by an index"));
            }
            let idx: usize = match src.text[ds..pos].parse() {
                Ok(v) if v <= MAX_DIM => v,
                Ok(_) | Err(_) => {
                    return Err(src.diag(ds, ParseErrorKind::Overflow, format!("variable index exceeds {MAX_DIM}")))
                }
            };
            if idx == 0 {
                return Err(src.diag(start, ParseErrorKind::UnknownVariable, "variable indices start at 1"));
            }
            out.push(Token { tok: Tok::Var(idx), start });
            continue;
        }
        if b == b'i' && !bytes.get(pos + 1).is_some_and(|c| c.is_ascii_alphabetic()) {
            out.push(Token { tok: Tok::I, start });
            pos += 1;
            continue;
        }
        if b.is_ascii_alphabetic() {
            let mut end = pos;
            while end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
                end += 1;
            }
            return Err(src.diag(
                start,
                ParseErrorKind::UnknownVariable,
                format!("unknown identifier '{}'", &src.text[start..end]),
            ));
        }
        return Err(src.diag(start, ParseErrorKind::UnexpectedToken, "unexpected character"));
    }
    out.push(Token { tok: Tok::End, start: bytes.len() });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    I,
    Var(usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32, usize),
}

struct Parser<'a, 'b> {
    src: &'b Source<'a>,
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser<'_, '_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: &Token, what: &str) -> ParseDiagnostic {
        let found = match &t.tok {
            Tok::End => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        self.src.diag(t.start, ParseErrorKind::UnexpectedToken, format!("expected {what}, found {found}"))
    }

    fn enter(&mut self, at: usize) -> PResult<()> {
        self.depth += 1;
        if self.depth > 200 {
            return Err(self.src.diag(at, ParseErrorKind::Overflow, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?), t.start);
                }
                Tok::Int(_) | Tok::Decimal(_) | Tok::Var(_) | Tok::I | Tok::LParen => {
                    return Err(self.src.diag(
                        t.start,
                        ParseErrorKind::UnexpectedToken,
                        "implicit multiplication is not supported; use '*'",
                    ))
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        self.enter(t.start)?;
        let out = if t.tok == Tok::Minus {
            self.bump();
            Expr::Neg(Box::new(self.factor()?))
        } else {
            let base = self.base()?;
            if self.peek().tok == Tok::Caret {
                let caret = self.bump();
                let e = self.bump();
                match e.tok {
                    Tok::Int(v) => {
                        if self.peek().tok == Tok::Slash {
                            let s = self.peek().start;
                            return Err(self.src.diag(s, ParseErrorKind::NonIntegerExponent, "exponent must be an integer"));
                        }
                        let e_val = u32::try_from(&v).ok().filter(|&x| x <= MAX_EXPONENT).ok_or_else(|| {
                            self.src.diag(e.start, ParseErrorKind::Overflow, format!("exponent exceeds {MAX_EXPONENT}"))
                        })?;
                        Expr::Pow(Box::new(base), e_val, caret.start)
                    }
                    Tok::Decimal(_) | Tok::Minus | Tok::I | Tok::Var(_) | Tok::LParen => {
                        return Err(self.src.diag(
                            e.start,
                            ParseErrorKind::NonIntegerExponent,
                            "exponent must be a non-negative integer literal",
                        ))
                    }
                    _ => return Err(self.unexpected(&e, "an exponent")),
                }
            } else {
                base
            }
        };
        self.depth -= 1;
        Ok(out)
    }

    fn base(&mut self) -> PResult<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::I => Ok(Expr::I),
            Tok::Var(k) => Ok(Expr::Var(k, t.start)),
            Tok::Decimal(q) => Ok(Expr::Num(q)),
            Tok::Int(n) => {
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.bump();
                    match d.tok {
                        Tok::Int(den) if den.is_zero() => {
                            Err(self.src.diag(d.start, ParseErrorKind::UnexpectedToken, "zero denominator"))
                        }
                        Tok::Int(den) => Ok(Expr::Num(Rational::new(n, den))),
                        _ => Err(self.unexpected(&d, "an integer denominator")),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.unexpected(&close, "')'"));
                }
                Ok(e)
            }
            _ => Err(self.unexpected(&t, "a number, 'i', a variable or '('")),
        }
    }
}

fn max_var(e: &Expr) -> (usize, usize) {
    match e {
        Expr::Var(k, at) => (*k, *at),
        Expr::Num(_) | Expr::I => (0, 0),
        Expr::Neg(a) | Expr::Pow(a, _, _) => max_var(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b, _) => {
            let (x, y) = (max_var(a), max_var(b));
            if y.0 > x.0 {
                y
            } else {
                x
            }
        }
    }
}

fn eval(e: &Expr, n: usize, src: &Source<'_>) -> PResult<Polynomial> {
    let check = |p: Polynomial, at: usize| -> PResult<Polynomial> {
        if p.num_terms() > MAX_TERMS || p.total_degree().unwrap_or(0) > MAX_DEGREE {
            return Err(src.diag(at, ParseErrorKind::Overflow, "expanded polynomial is too large"));
        }
        Ok(p)
    };
    Ok(match e {
        Expr::Num(q) => Polynomial::constant(n, GaussianRational::from_rational(q.clone())),
        Expr::I => Polynomial::constant(n, GaussianRational::i()),
        Expr::Var(k, _) => Polynomial::var(n, k - 1),
        Expr::Add(a, b) => &eval(a, n, src)? + &eval(b, n, src)?,
        Expr::Sub(a, b) => &eval(a, n, src)? - &eval(b, n, src)?,
        Expr::Neg(a) => -&eval(a, n, src)?,
        Expr::Mul(a, b, at) => {
            let (x, y) = (eval(a, n, src)?, eval(b, n, src)?);
            let deg = x.total_degree().unwrap_or(0) + y.total_degree().unwrap_or(0);
            if deg > MAX_DEGREE || x.num_terms().saturating_mul(y.num_terms()) > 50 * MAX_TERMS {
                return Err(src.diag(*at, ParseErrorKind::Overflow, "expanded polynomial is too large"));
            }
            check(&x * &y, *at)?
        }
        Expr::Pow(a, k, at) => {
            let x = eval(a, n, src)?;
            if x.total_degree().unwrap_or(0).saturating_mul(*k) > MAX_DEGREE {
                return Err(src.diag(*at, ParseErrorKind::Overflow, "expanded polynomial is too large"));
            }
            let mut acc = Polynomial::one(n);
            for _ in 0..*k {
                acc = check(&acc * &x, *at)?;
            }
            acc
        }
    })
}

fn parse_expr(src: &Source<'_>) -> PResult<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0, depth: 0 };
    if p.peek().tok == Tok::End {
        return Err(src.diag(0, ParseErrorKind::UnexpectedToken, "empty expression"));
    }
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.unexpected(&t, "an operator or end of input"));
    }
    Ok(e)
}

/// Parses a symbol. Without `dim` the dimension is the highest variable
/// index mentioned (at least 1).
pub fn parse_operator(text: &str, dim: Option<usize>) -> PResult<Polynomial> {
    let src = Source { text, base: 0, full: text };
    let e = parse_expr(&src)?;
    let (m, at) = max_var(&e);
    let n = match dim {
        Some(d) if m > d => {
            return Err(src.diag(at, ParseErrorKind::DimensionMismatch, format!("variable index {m} exceeds dimension {d}")))
        }
        Some(d) => d.max(1),
        None => m.max(1),
    };
    eval(&e, n, &src)
}

/// Parses a system file: one operator per line, `#` comments, optional
/// header `weights: l1 l2 ... ln`.
pub fn parse_system(text: &str, dim: Option<usize>) -> PResult<OperatorSystem> {
    let mut exprs = Vec::new();
    let mut weights: Option<(Vec<u32>, usize)> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let base = offset;
        offset += line.len();
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix("weights:") {
            let src = Source { text: body, base, full: text };
            if weights.is_some() || !exprs.is_empty() {
                return Err(src.diag(lead, ParseErrorKind::UnexpectedToken, "weights header must come first"));
            }
            let mut w = Vec::new();
            for tok in rest.split_whitespace() {
                match tok.parse::<u32>() {
                    Ok(v) if v >= 1 => w.push(v),
                    _ => return Err(src.diag(lead, ParseErrorKind::UnexpectedToken, format!("invalid weight '{tok}'"))),
                }
            }
            if w.is_empty() {
                return Err(src.diag(lead, ParseErrorKind::UnexpectedToken, "empty weights header"));
            }
            weights = Some((w, base + lead));
            continue;
        }
        let src = Source { text: body, base, full: text };
        exprs.push((parse_expr(&src)?, base));
    }
    let whole = Source { text, base: 0, full: text };
    if exprs.is_empty() {
        return Err(whole.diag(0, ParseErrorKind::UnexpectedToken, "system contains no operators"));
    }
    let m = exprs.iter().map(|(e, _)| max_var(e).0).max().unwrap_or(0);
    let n = match (&weights, dim) {
        (Some((w, _)), _) => w.len(),
        (None, Some(d)) => d,
        (None, None) => m.max(1),
    };
    let mut ops = Vec::new();
    for (e, base) in &exprs {
        let (k, at) = max_var(e);
        if k > n {
            return Err(whole.diag(
                base + at,
                ParseErrorKind::DimensionMismatch,
                format!("variable index {k} exceeds dimension {n}"),
            ));
        }
        ops.push(eval(e, n, &whole)?);
    }
    let wv = match weights {
        Some((w, at)) => Some(
            WeightVector::new(w).map_err(|e| whole.diag(at, ParseErrorKind::UnexpectedToken, e.to_string()))?,
        ),
        None => None,
    };
    OperatorSystem::new(ops, wv).map_err(|e| whole.diag(0, ParseErrorKind::DimensionMismatch, e.to_string()))
}

fn fmt_monomial(a: &MultiIndex) -> String {
    let parts: Vec<String> = a
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| if e == 1 { format!("D{}", k + 1) } else { format!("D{}^{}", k + 1, e) })
        .collect();
    parts.join("*")
}

fn fmt_abs_rational(q: &Rational) -> String {
    let s = fmt_rational(&q.abs());
    if q.is_integer() {
        s
    } else {
        format!("({s})")
    }
}

/// Canonical text in descending graded-lex order; `parse_operator` inverts
/// it exactly.
pub fn format_operator(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (a, c)) in p.terms().rev().enumerate() {
        let mono = fmt_monomial(a);
        let (negative, body) = if c.is_real() || c.re.is_zero() {
            let (v, imag) = if c.is_real() { (&c.re, false) } else { (&c.im, true) };
            let mag = v.abs();
            let mut parts = Vec::new();
            if !imag && mono.is_empty() {
                parts.push(fmt_rational(&mag));
            } else if !mag.is_one() {
                parts.push(fmt_abs_rational(v));
            }
            if imag {
                parts.push("i".to_string());
            }
            if !mono.is_empty() {
                parts.push(mono);
            }
            (v.is_negative(), parts.join("*"))
        } else if mono.is_empty() {
            (false, format!("({c})"))
        } else {
            (false, format!("({c})*{mono}"))
        };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}
