//! Unpolarized propositions and their concrete syntax.
//!
//! Grammar (loosest first):
//!
//! ```text
//! prop  ::= unary ( "->" prop )?
//! unary ::= "~" unary | "dia" unary | "box" unary | atom | "bot" | "(" prop ")"
//! ```
//!
//! `~P` is sugar for `P -> bot`; the printer uses it for every implication
//! into `bot`, and `print(parse(s)) == s` holds for printer output.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(Arc<str>),
    Bot,
    Imp(Arc<Prop>, Arc<Prop>),
    Dia(Arc<Prop>),
    Box(Arc<Prop>),
}

impl Prop {
    pub fn atom(name: &str) -> Prop {
        Prop::Atom(Arc::from(name))
    }

    pub fn imp(a: Prop, b: Prop) -> Prop {
        Prop::Imp(Arc::new(a), Arc::new(b))
    }

    /// `¬A`, i.e. `A ⊃ ⊥`.
    pub fn not(a: Prop) -> Prop {
        Prop::imp(a, Prop::Bot)
    }

    pub fn dia(a: Prop) -> Prop {
        Prop::Dia(Arc::new(a))
    }

    pub fn boxed(a: Prop) -> Prop {
        Prop::Box(Arc::new(a))
    }

    /// Right-nested implication chain `a1 ⊃ (a2 ⊃ … ⊃ goal)`.
    pub fn imps(premises: impl IntoIterator<Item = Prop>, goal: Prop) -> Prop {
        let premises: Vec<Prop> = premises.into_iter().collect();
        premises
            .into_iter()
            .rev()
            .fold(goal, |acc, p| Prop::imp(p, acc))
    }

    /// Number of connectives (⊃, ◇, □).
    pub fn size(&self) -> usize {
        match self {
            Prop::Atom(_) | Prop::Bot => 0,
            Prop::Imp(a, b) => 1 + a.size() + b.size(),
            Prop::Dia(a) | Prop::Box(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Prop::Atom(_) | Prop::Bot => 0,
            Prop::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Prop::Dia(a) | Prop::Box(a) => 1 + a.depth(),
        }
    }

    /// True for the ⊃/⊥/atom fragment.
    pub fn is_propositional(&self) -> bool {
        match self {
            Prop::Atom(_) | Prop::Bot => true,
            Prop::Imp(a, b) => a.is_propositional() && b.is_propositional(),
            Prop::Dia(_) | Prop::Box(_) => false,
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Prop>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Prop::Atom(_) | Prop::Bot => {}
            Prop::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Prop::Dia(a) | Prop::Box(a) => a.collect_subformulas(out),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.subformulas()
            .into_iter()
            .filter_map(|p| match p {
                Prop::Atom(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Substitutes propositions for atoms (schema instantiation).
    pub fn instantiate(&self, f: &impl Fn(&str) -> Option<Prop>) -> Prop {
        match self {
            Prop::Atom(n) => f(n).unwrap_or_else(|| self.clone()),
            Prop::Bot => Prop::Bot,
            Prop::Imp(a, b) => Prop::imp(a.instantiate(f), b.instantiate(f)),
            Prop::Dia(a) => Prop::dia(a.instantiate(f)),
            Prop::Box(a) => Prop::boxed(a.instantiate(f)),
        }
    }

    fn is_negation(&self) -> bool {
        matches!(self, Prop::Imp(_, b) if **b == Prop::Bot)
    }

    fn fmt_unary(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, Prop::Imp(..)) && !self.is_negation() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(n) => f.write_str(n),
            Prop::Bot => f.write_str("bot"),
            Prop::Imp(a, b) if **b == Prop::Bot => {
                f.write_str("~")?;
                a.fmt_unary(f)
            }
            Prop::Imp(a, b) => {
                a.fmt_unary(f)?;
                write!(f, " -> {b}")
            }
            Prop::Dia(a) => {
                f.write_str("dia ")?;
                a.fmt_unary(f)
            }
            Prop::Box(a) => {
                f.write_str("box ")?;
                a.fmt_unary(f)
            }
        }
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }

    /// Shifts a single-line error to its position inside a larger file.
    pub(crate) fn at_line(mut self, line: usize, col_offset: usize) -> Self {
        self.line = line;
        self.col += col_offset;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Arrow,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '~' => {
                toks.push((Tok::Tilde, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((Tok::Arrow, col));
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), col));
            }
            other => return Err(ParseError::new(1, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(1, self.col(), msg)
    }

    fn prop(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.prop()?;
            Ok(Prop::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Prop, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Prop::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.prop()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "bot" => Ok(Prop::Bot),
                    "dia" => Ok(Prop::dia(self.unary()?)),
                    "box" => Ok(Prop::boxed(self.unary()?)),
                    _ => Ok(Prop::atom(&id)),
                }
            }
            Some(Tok::Arrow) => Err(self.err("expected a proposition before `->`")),
            Some(Tok::RParen) => Err(self.err("unexpected `)`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses one proposition from a single line of text.
pub fn parse_prop(src: &str) -> Result<Prop, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.len() + 1 };
    let prop = p.prop()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(prop)
}

impl std::str::FromStr for Prop {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prop(s)
    }
}
