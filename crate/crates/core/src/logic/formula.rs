use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::SyntaxError;

const MAX_DEPTH: usize = 128;

/// Propositional formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Variables in sorted order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out.into_iter().collect()
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Not(a) => a.collect(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            Formula::Top | Formula::Bottom | Formula::Var(_) => 5,
        }
    }
}

fn operand(f: &mut fmt::Formatter<'_>, e: &Formula, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints in the ASCII syntax with the fewest parentheses that parse back to
/// the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("1"),
            Formula::Bottom => f.write_str("0"),
            Formula::Var(v) => f.write_str(v),
            Formula::Not(a) => {
                f.write_str("~")?;
                operand(f, a, 4)
            }
            Formula::And(a, b) => {
                operand(f, a, 3)?;
                f.write_str(" & ")?;
                operand(f, b, 4)
            }
            Formula::Or(a, b) => {
                operand(f, a, 2)?;
                f.write_str(" | ")?;
                operand(f, b, 3)
            }
            Formula::Implies(a, b) => {
                operand(f, a, 2)?;
                f.write_str(" -> ")?;
                operand(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' | '⇒' => Tok::Implies,
            '⊤' | '1' => Tok::Top,
            '⊥' | '0' => Tok::Bottom,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Implies,
                _ => return Err(SyntaxError::new(i, "expected `->`")),
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = c.to_string();
                while let Some(&(_, n)) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        name.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(name)
            }
            other => return Err(SyntaxError::new(i, format!("unexpected character `{other}`"))),
        };
        out.push((i, tok));
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

    fn enter(&mut self) -> Result<(), SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.offset(), "formula nested too deeply"));
        }
        Ok(())
    }

    fn implic(&mut self) -> Result<Formula, SyntaxError> {
        self.enter()?;
        let lhs = self.disj()?;
        let out = if *self.peek() == Tok::Implies {
            self.bump();
            Formula::implies(lhs, self.implic()?)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disj(&mut self) -> Result<Formula, SyntaxError> {
        let saved = self.depth;
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            self.enter()?;
            lhs = Formula::or(lhs, self.conj()?);
        }
        self.depth = saved;
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, SyntaxError> {
        let saved = self.depth;
        let mut lhs = self.neg()?;
        while *self.peek() == Tok::And {
            self.bump();
            self.enter()?;
            lhs = Formula::and(lhs, self.neg()?);
        }
        self.depth = saved;
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula, SyntaxError> {
        if *self.peek() == Tok::Not {
            self.bump();
            self.enter()?;
            let inner = self.neg()?;
            self.depth -= 1;
            return Ok(Formula::not(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bottom => Ok(Formula::Bottom),
            Tok::LParen => {
                let inner = self.implic()?;
                if *self.peek() != Tok::RParen {
                    return Err(SyntaxError::new(self.offset(), "expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(SyntaxError::new(at, "unexpected end of input")),
            other => Err(SyntaxError::new(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a formula. Precedence from tightest: `~`, `&`, `|`, `->`;
/// `->` associates to the right. `¬ ∧ ∨ → ⇒ ⊤ ⊥` are accepted as aliases.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, depth: 0 };
    let f = p.implic()?;
    if *p.peek() != Tok::End {
        return Err(SyntaxError::new(p.offset(), "unexpected trailing input"));
    }
    Ok(f)
}
