use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Atom, Clause, GroundAtom, Literal, LpError, Program, Term};
use crate::syntax::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Bang,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '%' => break,
                c if c.is_whitespace() => i += 1,
                '(' | ')' | ',' | '.' | '!' => {
                    out.push((
                        match c {
                            '(' => Tok::LParen,
                            ')' => Tok::RParen,
                            ',' => Tok::Comma,
                            '.' => Tok::Dot,
                            _ => Tok::Bang,
                        },
                        line_no,
                        col,
                    ));
                    i += 1;
                }
                ':' if chars.get(i + 1) == Some(&'-') => {
                    out.push((Tok::Neck, line_no, col));
                    i += 2;
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    out.push((Tok::Ident(chars[start..i].iter().collect()), line_no, col));
                }
                other => return Err(ParseError::new(line_no, col, format!("unexpected character `{other}`"))),
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.toks.get(self.pos).map_or(self.end, |t| (t.1, t.2));
        Err(ParseError::new(l, c, msg))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end.0, |t| t.1)
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = self.ident("a predicate name")?;
        if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            self.pos -= 1;
            return self.err(format!("predicate `{name}` must start with a lowercase letter"));
        }
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let a = self.ident("a constant or variable")?;
                args.push(if a.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
                    Term::Var(Arc::from(a.as_str()))
                } else {
                    Term::Const(Arc::from(a.as_str()))
                });
                if self.eat(&Tok::RParen) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.err("expected `,` or `)`");
                }
            }
        }
        Ok(Atom { pred: Arc::from(name.as_str()), args })
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let line = self.line();
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.eat(&Tok::Neck) {
            loop {
                let negated = self.eat(&Tok::Bang);
                body.push(Literal { atom: self.atom()?, negated });
                if self.eat(&Tok::Dot) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.err("expected `,` or `.`");
                }
            }
        } else if !self.eat(&Tok::Dot) {
            return self.err("expected `:-` or `.`");
        }
        Ok(Clause { head, body, line })
    }
}

fn vars(a: &Atom) -> impl Iterator<Item = &Arc<str>> {
    a.args.iter().filter_map(|t| match t {
        Term::Var(v) => Some(v),
        Term::Const(_) => None,
    })
}

pub fn parse_program(src: &str) -> Result<Program, LpError> {
    let toks = lex(src)?;
    let lines = src.lines().count().max(1);
    let last_len = src.lines().last().map_or(0, |l| l.chars().count());
    let mut p = Parser { toks, pos: 0, end: (lines, last_len + 1) };
    let mut clauses = Vec::new();
    while p.peek().is_some() {
        clauses.push(p.clause()?);
    }
    for c in &clauses {
        let bound: BTreeSet<&Arc<str>> = c.body.iter().flat_map(|l| vars(&l.atom)).collect();
        if let Some(v) = vars(&c.head).find(|v| !bound.contains(v)) {
            return Err(LpError::RangeRestriction { line: c.line, var: v.to_string(), clause: c.to_string() });
        }
    }
    Ok(Program { clauses })
}

/// Parses a single ground atom such as `noedge(a,a)` or `p`.
pub fn parse_atom(src: &str) -> Result<GroundAtom, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: (1, src.chars().count() + 1) };
    let a = p.atom()?;
    if p.peek().is_some() {
        return p.err("trailing input after the atom");
    }
    let mut args = Vec::new();
    for t in a.args {
        match t {
            Term::Const(c) => args.push(c),
            Term::Var(v) => return Err(ParseError::new(1, 1, format!("query atoms must be ground, found variable `{v}`"))),
        }
    }
    Ok(GroundAtom { pred: a.pred, args })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fact_and_rule() {
        let p = parse_program("edge(a,b).\nnoedge(X,Y) :- path(X,Y), !edge(X,Y).\n").unwrap();
        assert_eq!(p.clauses.len(), 2);
        assert!(p.clauses[0].body.is_empty());
        let r = &p.clauses[1];
        assert_eq!(r.body.iter().filter(|l| l.negated).count(), 1);
        assert_eq!(r.to_string(), "noedge(X,Y) :- path(X,Y), !edge(X,Y).");
        assert_eq!(r.line, 2);
    }

    #[test]
    fn range_restriction() {
        assert!(matches!(parse_program("p(X)."), Err(LpError::RangeRestriction { .. })));
        assert!(parse_program("p(X) :- !q(X).").is_ok());
    }

    #[test]
    fn zero_arity_and_comments() {
        let p = parse_program("% nothing\np. q :- p, !r.\n").unwrap();
        assert_eq!(p.clauses.len(), 2);
        assert_eq!(p.to_string(), "p.\nq :- p, !r.\n");
    }

    #[test]
    fn positioned_errors() {
        let e = parse_program("p(a).\nq(a) :- p(a)\n").unwrap_err();
        let LpError::Parse(e) = e else { panic!() };
        assert_eq!(e.line, 2);
        let LpError::Parse(e) = parse_program("p(a) :- #.").unwrap_err() else { panic!() };
        assert_eq!((e.line, e.col), (1, 9));
    }

    #[test]
    fn ground_atoms() {
        assert_eq!(parse_atom("noedge(a,a)").unwrap(), GroundAtom::new("noedge", &["a", "a"]));
        assert_eq!(parse_atom("p").unwrap().to_string(), "p");
        assert!(parse_atom("p(X)").is_err());
    }
}
