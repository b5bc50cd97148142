//! The expression language shared by every subcommand.
//!
//! ```text
//! sum     := wedge (('+' | '-') wedge)*
//! wedge   := product ('/\' product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number | variable | '(' sum ')'
//! ```
//!
//! Numbers are integers or `p/q` literals (no spaces). Variables are `x1..xd`,
//! `y1..yd`, `h` and the 1-forms `dx1..dyd`. The wedge binds looser than `*`
//! and tighter than `+`, so `x2*dx1 /\ dy1 + dx2 /\ dy2` means what it looks
//! like.

use std::fmt;

use num_traits::{One, Zero};

use dqkit_core::rational::{self, Rational};
use dqkit_core::{DifferentialForm, SeriesError, TruncatedPoly, TruncationSpec, WeylElement, WeylError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
    H,
    Dx(usize),
    Dy(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::H => f.write_str("h"),
            Var::Dx(i) => write!(f, "dx{i}"),
            Var::Dy(i) => write!(f, "dy{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("unknown variable {name:?} at position {pos}")]
    UnknownName { pos: usize, name: String },
    #[error("exponent must be a non-negative integer (position {pos})")]
    BadExponent { pos: usize },
    #[error("unexpected end of input")]
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown variable {name} for d={d}")]
    UnknownVariable { name: String, d: usize },
    #[error("{0} is not allowed here")]
    NotAllowed(String),
    #[error("can only divide by a nonzero constant")]
    BadDivisor,
    #[error("cannot add forms of degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("expected a {expected}, got a {found}")]
    Kind { expected: &'static str, found: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

// --- lexer -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number {}", rational::to_display(q)),
            Tok::Ident(s) => write!(f, "name {s:?}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Wedge => f.write_str("'/\\'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                i += 2;
                out.push((start, Tok::Wedge));
                continue;
            }
            b'/' => Tok::Slash,
            b'0'..=b'9' => {
                let mut end = digits(i);
                // `p/q` literal: digits, slash, digits, with no spaces
                if bytes.get(end) == Some(&b'/') && bytes.get(end + 1).is_some_and(|b| b.is_ascii_digit()) {
                    end = digits(end + 1);
                }
                let q = rational::parse(&src[i..end]).map_err(|_| ParseError::Unexpected {
                    pos: i,
                    found: format!("literal {:?}", &src[i..end]),
                })?;
                if q.denom().is_zero() {
                    return Err(ParseError::Unexpected { pos: i, found: "zero denominator".into() });
                }
                i = end;
                out.push((start, Tok::Num(q)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut end = i;
                while end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                out.push((start, Tok::Ident(src[i..end].to_string())));
                i = end;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Unexpected { pos: i, found: format!("character {ch:?}") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn var_of(name: &str, pos: usize) -> Result<Var, ParseError> {
    let unknown = || ParseError::UnknownName { pos, name: name.to_string() };
    if name == "h" {
        return Ok(Var::H);
    }
    let (ctor, rest): (fn(usize) -> Var, &str) = if let Some(r) = name.strip_prefix("dx") {
        (Var::Dx, r)
    } else if let Some(r) = name.strip_prefix("dy") {
        (Var::Dy, r)
    } else if let Some(r) = name.strip_prefix('x') {
        (Var::X, r)
    } else if let Some(r) = name.strip_prefix('y') {
        (Var::Y, r)
    } else {
        return Err(unknown());
    };
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(unknown());
    }
    rest.parse().map(ctor).map_err(|_| unknown())
}

// --- parser ----------------------------------------------------------------

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.wedge()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    e = Expr::Add(Box::new(e), Box::new(self.wedge()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    e = Expr::Sub(Box::new(e), Box::new(self.wedge()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn wedge(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        while self.peek() == Some(&Tok::Wedge) {
            self.at += 1;
            e = Expr::Wedge(Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    e = Expr::Div(Box::new(e), Box::new(self.unary()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        match self.next() {
            Some((_, Tok::Num(q))) if q.is_integer() => {
                let k = u32::try_from(q.numer()).map_err(|_| ParseError::BadExponent { pos })?;
                Ok(Expr::Pow(Box::new(base), k))
            }
            Some(_) => Err(ParseError::BadExponent { pos }),
            None => Err(ParseError::Eof),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some((_, Tok::Num(q))) => Ok(Expr::Num(q)),
            Some((pos, Tok::Ident(name))) => Ok(Expr::Var(var_of(&name, pos)?)),
            Some((_, Tok::LParen)) => {
                let e = self.sum()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(e),
                    Some((pos, t)) => Err(ParseError::Unexpected { pos, found: t.to_string() }),
                    None => Err(ParseError::Eof),
                }
            }
            Some((pos, t)) => Err(ParseError::Unexpected { pos, found: t.to_string() }),
            None => Err(ParseError::Eof),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.sum()?;
    match p.next() {
        None => Ok(e),
        Some((pos, t)) => Err(ParseError::Unexpected { pos, found: t.to_string() }),
    }
}

// --- printing --------------------------------------------------------------

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Wedge(..) => 2,
            Expr::Mul(..) | Expr::Div(..) => 3,
            Expr::Neg(..) => 4,
            Expr::Pow(..) => 5,
            Expr::Num(q) if !q.is_integer() => 5,
            Expr::Num(_) | Expr::Var(_) => 6,
        }
    }
}

struct Child<'a>(&'a Expr, bool);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    /// Canonical print with the fewest parentheses that parse back to the same
    /// tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prec();
        let bin = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr| {
            write!(f, "{}{op}{}", Child(a, a.prec() < p), Child(b, b.prec() <= p))
        };
        match self {
            Expr::Num(q) => f.write_str(&rational::to_display(q)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-{}", Child(a, a.prec() < p)),
            Expr::Add(a, b) => bin(f, a, " + ", b),
            Expr::Sub(a, b) => bin(f, a, " - ", b),
            Expr::Mul(a, b) => bin(f, a, "*", b),
            // spaced so that `1 / 2` is not read as the literal `1/2`
            Expr::Div(a, b) => bin(f, a, " / ", b),
            Expr::Wedge(a, b) => bin(f, a, " /\\ ", b),
            // `p/q` literals are atoms to the lexer but not as a base
            Expr::Pow(a, k) => write!(f, "{}^{k}", Child(a, a.prec() < 6)),
        }
    }
}

// --- evaluation ------------------------------------------------------------

/// A value of the commutative language: a function or a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Poly(TruncatedPoly),
    Form(DifferentialForm),
}

impl Value {
    fn kind(&self) -> String {
        match self {
            Value::Poly(_) => "function".into(),
            Value::Form(w) => format!("{}-form", w.degree()),
        }
    }

    fn into_form(self) -> DifferentialForm {
        match self {
            Value::Poly(p) => DifferentialForm::from_poly(p),
            Value::Form(w) => w,
        }
    }
}

fn check_index(v: Var, d: usize) -> Result<(), EvalError> {
    let i = match v {
        Var::X(i) | Var::Y(i) | Var::Dx(i) | Var::Dy(i) => i,
        Var::H => return Ok(()),
    };
    if i == 0 || i > d {
        return Err(EvalError::UnknownVariable { name: v.to_string(), d });
    }
    Ok(())
}

fn constant_of(p: &TruncatedPoly) -> Option<Rational> {
    match p.len() {
        0 => Some(rational::zero()),
        1 if !p.constant_term().is_zero() => Some(p.constant_term()),
        _ => None,
    }
}

/// Evaluates in the commutative algebra of functions and forms at dimension
/// `d` and weight cutoff `n`.
pub fn eval(e: &Expr, d: usize, n: u32) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Num(q) => Value::Poly(TruncatedPoly::constant(d, n, q.clone())),
        Expr::Var(v) => {
            check_index(*v, d)?;
            match *v {
                Var::X(i) => Value::Poly(TruncatedPoly::x(d, n, i - 1)),
                Var::Y(i) => Value::Poly(TruncatedPoly::y(d, n, i - 1)),
                Var::H => Value::Poly(TruncatedPoly::h(d, n)),
                Var::Dx(i) => Value::Form(DifferentialForm::dz(d, n, i - 1)?),
                Var::Dy(i) => Value::Form(DifferentialForm::dz(d, n, d + i - 1)?),
            }
        }
        Expr::Neg(a) => match eval(a, d, n)? {
            Value::Poly(p) => Value::Poly(p.neg()),
            Value::Form(w) => Value::Form(w.neg()),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (eval(a, d, n)?, eval(b, d, n)?);
            let y = if matches!(e, Expr::Sub(..)) {
                match y {
                    Value::Poly(p) => Value::Poly(p.neg()),
                    Value::Form(w) => Value::Form(w.neg()),
                }
            } else {
                y
            };
            match (x, y) {
                (Value::Poly(p), Value::Poly(q)) => Value::Poly(p.add(&q)?),
                (x, y) => {
                    let (u, v) = (x.into_form(), y.into_form());
                    if u.degree() != v.degree() {
                        return Err(EvalError::DegreeMismatch(u.degree(), v.degree()));
                    }
                    Value::Form(u.add(&v)?)
                }
            }
        }
        Expr::Mul(a, b) => match (eval(a, d, n)?, eval(b, d, n)?) {
            (Value::Poly(p), Value::Poly(q)) => Value::Poly(p.mul(&q)?),
            (Value::Poly(p), Value::Form(w)) | (Value::Form(w), Value::Poly(p)) => Value::Form(w.mul_function(&p)?),
            (Value::Form(_), Value::Form(_)) => {
                return Err(EvalError::NotAllowed("'*' between forms (use /\\)".into()));
            }
        },
        Expr::Div(a, b) => {
            let k = match eval(b, d, n)? {
                Value::Poly(q) => constant_of(&q).filter(|k| !k.is_zero()).ok_or(EvalError::BadDivisor)?,
                Value::Form(_) => return Err(EvalError::BadDivisor),
            };
            let inv = Rational::one() / k;
            match eval(a, d, n)? {
                Value::Poly(p) => Value::Poly(p.scale(&inv)),
                Value::Form(w) => Value::Form(w.scale(&inv)),
            }
        }
        Expr::Wedge(a, b) => {
            let (u, v) = (eval(a, d, n)?.into_form(), eval(b, d, n)?.into_form());
            Value::Form(u.wedge(&v)?)
        }
        Expr::Pow(a, k) => match eval(a, d, n)? {
            Value::Poly(p) => Value::Poly(p.pow(*k)),
            Value::Form(_) => return Err(EvalError::NotAllowed("a power of a form".into())),
        },
    })
}

pub fn eval_poly(e: &Expr, d: usize, n: u32) -> Result<TruncatedPoly, EvalError> {
    match eval(e, d, n)? {
        Value::Poly(p) => Ok(p),
        v => Err(EvalError::Kind { expected: "function", found: v.kind() }),
    }
}

pub fn eval_form(e: &Expr, d: usize, n: u32) -> Result<DifferentialForm, EvalError> {
    Ok(eval(e, d, n)?.into_form())
}

/// Evaluates in the Weyl algebra: products are star products, so `y1*x1` is
/// the word `y1 x1`, which normal-orders to `x1*y1 - h`.
pub fn eval_weyl(e: &Expr, spec: TruncationSpec) -> Result<WeylElement, EvalError> {
    Ok(match e {
        Expr::Num(q) => WeylElement::scalar(spec, q.clone()),
        Expr::Var(v) => {
            check_index(*v, spec.d)?;
            match *v {
                Var::X(i) => WeylElement::x(spec, i - 1),
                Var::Y(i) => WeylElement::y(spec, i - 1),
                Var::H => WeylElement::h(spec),
                Var::Dx(_) | Var::Dy(_) => return Err(EvalError::NotAllowed(format!("the form {v} in a Weyl word"))),
            }
        }
        Expr::Neg(a) => eval_weyl(a, spec)?.neg(),
        Expr::Add(a, b) => eval_weyl(a, spec)?.add(&eval_weyl(b, spec)?)?,
        Expr::Sub(a, b) => eval_weyl(a, spec)?.sub(&eval_weyl(b, spec)?)?,
        Expr::Mul(a, b) => eval_weyl(a, spec)?.star(&eval_weyl(b, spec)?)?,
        Expr::Div(a, b) => {
            let k = constant_of(eval_weyl(b, spec)?.symbol()).filter(|k| !k.is_zero()).ok_or(EvalError::BadDivisor)?;
            eval_weyl(a, spec)?.scale(&(Rational::one() / k))
        }
        Expr::Wedge(..) => return Err(EvalError::NotAllowed("'/\\' in a Weyl word".into())),
        Expr::Pow(a, k) => {
            let base = eval_weyl(a, spec)?;
            let mut acc = WeylElement::one(spec);
            for _ in 0..*k {
                acc = acc.star(&base)?;
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dqkit_core::rational::rat;

    #[test]
    fn rational_literals_bind_before_products() {
        let e = parse("1/2*h").unwrap();
        assert_eq!(e, Expr::Mul(Box::new(Expr::Num(rat(1, 2))), Box::new(Expr::Var(Var::H))));
    }

    #[test]
    fn wedge_is_between_products_and_sums() {
        let e = parse("a").unwrap_err();
        assert!(matches!(e, ParseError::UnknownName { pos: 0, .. }));
        let e = parse("x1*dx1 /\\ dy1 + dx2 /\\ dy2").unwrap();
        assert!(matches!(e, Expr::Add(..)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse("x1 + * y1").unwrap_err(), ParseError::Unexpected { pos: 5, found: "'*'".into() });
        assert_eq!(parse("(x1").unwrap_err(), ParseError::Eof);
        assert!(matches!(parse("x1^y1"), Err(ParseError::BadExponent { pos: 3 })));
        assert!(matches!(parse("x1 % 2"), Err(ParseError::Unexpected { pos: 3, .. })));
    }
}
