//! Arithmetic expressions over the smooth line.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | base ("^" UINT)?
//! base   := NUMBER | IDENT | "(" expr ")" | FUNC "(" expr ")"
//! FUNC   := sqrt | exp | sin | cos | log | inv
//! ```
//!
//! `NUMBER` is a decimal literal; a rational `p/q` parses as the quotient of
//! two literals, which evaluates to the same value. Leading unary minus is
//! accepted in addition to the binary operators.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraSpec, Jet, WeilError};
use crate::scalar::{format_rational, Scalar, Transcendental};
use crate::syntax::SyntaxError;

/// Largest exponent accepted after `^`.
pub const MAX_POWER: u32 = 4096;

// bounds the tree height, including left-nested operator chains
const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Sin,
    Cos,
    Log,
    Inv,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sqrt, Func::Exp, Func::Sin, Func::Cos, Func::Log, Func::Inv];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Inv => "inv",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative literal.
    Number(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Whether evaluation needs a transcendental function.
    pub fn uses_transcendentals(&self) -> bool {
        match self {
            Expr::Number(_) | Expr::Var(_) => false,
            Expr::Call(f, a) => {
                matches!(f, Func::Exp | Func::Sin | Func::Cos | Func::Log) || a.uses_transcendentals()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_transcendentals(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_transcendentals() || b.uses_transcendentals()
            }
        }
    }

    /// Evaluates in `algebra`, resolving variables through `lookup`.
    pub fn eval<S: Scalar>(
        &self,
        algebra: &Arc<AlgebraSpec>,
        lookup: &dyn Fn(&str) -> Option<Jet<S>>,
    ) -> Result<Jet<S>, WeilError> {
        Ok(match self {
            Expr::Number(q) => Jet::constant(algebra, S::from_rational(q)),
            Expr::Var(v) => lookup(v).ok_or_else(|| WeilError::UnboundVariable(v.clone()))?,
            Expr::Neg(a) => -a.eval(algebra, lookup)?,
            Expr::Add(a, b) => a.eval(algebra, lookup)?.checked_add(&b.eval(algebra, lookup)?)?,
            Expr::Sub(a, b) => a.eval(algebra, lookup)?.checked_sub(&b.eval(algebra, lookup)?)?,
            Expr::Mul(a, b) => a.eval(algebra, lookup)?.checked_mul(&b.eval(algebra, lookup)?)?,
            Expr::Div(a, b) => a.eval(algebra, lookup)?.checked_div(&b.eval(algebra, lookup)?)?,
            Expr::Pow(a, n) => a.eval(algebra, lookup)?.pow(*n),
            Expr::Call(f, a) => {
                let x = a.eval(algebra, lookup)?;
                match f {
                    Func::Sqrt => x.sqrt()?,
                    Func::Inv => x.invert()?,
                    Func::Exp => x.transcendental(Transcendental::Exp)?,
                    Func::Sin => x.transcendental(Transcendental::Sin)?,
                    Func::Cos => x.transcendental(Transcendental::Cos)?,
                    Func::Log => x.transcendental(Transcendental::Log)?,
                }
            }
        })
    }

    /// Evaluates with every variable bound to `x`. Expressions with more
    /// than one distinct variable are rejected.
    pub fn eval_at<S: Scalar>(&self, x: &Jet<S>) -> Result<Jet<S>, WeilError> {
        let vars = self.free_variables();
        if vars.len() > 1 {
            let extra = vars.iter().nth(1).expect("two variables").clone();
            return Err(WeilError::UnboundVariable(extra));
        }
        self.eval(x.algebra(), &|_| Some(x.clone()))
    }

    /// Evaluates a closed expression.
    pub fn eval_constant<S: Scalar>(&self, algebra: &Arc<AlgebraSpec>) -> Result<Jet<S>, WeilError> {
        self.eval(algebra, &|_| None)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Number(q) if !q.denom().is_one() => 2,
            Expr::Number(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(q) => f.write_str(&format_literal(q)),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { " * " } else { " / " })?;
                write_operand(f, b, 3)
            }
            Expr::Pow(a, n) => {
                write_operand(f, a, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Terminating decimals print as decimals, anything else as `p/q`.
fn format_literal(q: &BigRational) -> String {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format_rational(q);
    }
    let places = twos.max(fives);
    if places == 0 {
        return q.numer().to_string();
    }
    let scaled = q * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    format!("{int}.{frac}")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let text = &src[start..i];
                let q = crate::scalar::parse_rational(text)
                    .filter(|_| text.matches('.').count() <= 1)
                    .ok_or_else(|| SyntaxError::new(start, format!("malformed number `{text}`")))?;
                out.push((start, Tok::Num(q)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError::new(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(SyntaxError::new(self.offset(), format!("expected {what}")))
        }
    }

    fn enter(&mut self) -> Result<(), SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.offset(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let saved = self.depth;
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    self.enter()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    self.enter()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth = saved;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let saved = self.depth;
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    self.enter()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    self.enter()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        self.depth = saved;
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        if *self.peek() == Tok::Minus {
            self.enter()?;
            self.bump();
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Tok::Num(q) if q.is_integer() => {
                    let n: u32 = q
                        .to_integer()
                        .try_into()
                        .ok()
                        .filter(|&n| n <= MAX_POWER)
                        .ok_or_else(|| {
                            SyntaxError::new(at, format!("exponent exceeds {MAX_POWER}"))
                        })?;
                    return Ok(Expr::Pow(Box::new(base), n));
                }
                _ => return Err(SyntaxError::new(at, "expected unsigned integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(q) => Ok(Expr::Number(q)),
            Tok::Ident(name) => match Func::from_name(&name) {
                Some(func) => {
                    self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
                None => Ok(Expr::Var(name)),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::End => Err(SyntaxError::new(at, "unexpected end of input")),
            other => Err(SyntaxError::new(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an arithmetic expression.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(SyntaxError::new(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}
