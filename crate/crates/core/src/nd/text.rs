//! Parenthesized text form of proof terms.
//!
//! ```text
//! (hyp N)
//! (bot-e W T)
//! (imp-i T)
//! (imp-e [A] T T)          ; T proves A -> C, the second T proves A
//! (dia-i W T)
//! (dia-e W [A] T {W T ...})
//! (box-i {W T ...})
//! (box-e W [A] T _)        ; `_` when there is no continuation
//! ```
//!
//! `W` is a world name and `[A]` a proposition. `;` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::NdTerm;
use crate::syntax::{parse_prop, Frame, Prop, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct NdParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl NdTerm {
    pub fn display<'a>(&'a self, frame: &'a Frame) -> impl fmt::Display + 'a {
        Show { t: self, frame }
    }
}

struct Show<'a> {
    t: &'a NdTerm,
    frame: &'a Frame,
}

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fr = self.frame;
        let s = |t: &'_ NdTerm| Show { t, frame: fr }.to_string();
        let table = |t: &BTreeMap<World, NdTerm>| {
            let items: Vec<String> = t.iter().map(|(&u, x)| format!("{} {}", fr.name(u), s(x))).collect();
            format!("{{{}}}", items.join(" "))
        };
        match self.t {
            NdTerm::Hyp(i) => write!(f, "(hyp {i})"),
            NdTerm::BotE { world, sub } => write!(f, "(bot-e {} {})", fr.name(*world), s(sub)),
            NdTerm::ImpI(b) => write!(f, "(imp-i {})", s(b)),
            NdTerm::ImpE { arg_ty, fun, arg } => write!(f, "(imp-e [{arg_ty}] {} {})", s(fun), s(arg)),
            NdTerm::DiaI { world, sub } => write!(f, "(dia-i {} {})", fr.name(*world), s(sub)),
            NdTerm::DiaE { world, inner, scrutinee, table: t } => {
                write!(f, "(dia-e {} [{inner}] {} {})", fr.name(*world), s(scrutinee), table(t))
            }
            NdTerm::BoxI { table: t } => write!(f, "(box-i {})", table(t)),
            NdTerm::BoxE { world, inner, scrutinee, cont } => {
                let c = cont.as_ref().map_or_else(|| "_".to_string(), |c| s(c));
                write!(f, "(box-e {} [{inner}] {} {c})", fr.name(*world), s(scrutinee))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    LBrace,
    RBrace,
    Blank,
    Word(String),
    Prop(String),
}

struct Lexed {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexed, NdParseError> {
    let mut toks = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut k = 0;
        while k < chars.len() {
            let (byte, c) = chars[k];
            let col = line[..byte].chars().count() + 1;
            match c {
                ';' => break,
                c if c.is_whitespace() => k += 1,
                '(' | ')' | '{' | '}' => {
                    let t = match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        '{' => Tok::LBrace,
                        _ => Tok::RBrace,
                    };
                    toks.push((t, line_no, col));
                    k += 1;
                }
                '[' => {
                    let Some(end) = line[byte..].find(']') else {
                        return Err(NdParseError { line: line_no, col, msg: "unclosed `[`".into() });
                    };
                    toks.push((Tok::Prop(line[byte + 1..byte + end].to_string()), line_no, col + 1));
                    let stop = byte + end + 1;
                    while k < chars.len() && chars[k].0 < stop {
                        k += 1;
                    }
                }
                _ => {
                    let start = byte;
                    while k < chars.len() {
                        let ch = chars[k].1;
                        if ch.is_whitespace() || "(){}[];".contains(ch) {
                            break;
                        }
                        k += 1;
                    }
                    let end = chars.get(k).map_or(line.len(), |x| x.0);
                    let word = &line[start..end];
                    let t = if word == "_" { Tok::Blank } else { Tok::Word(word.to_string()) };
                    toks.push((t, line_no, col));
                }
            }
        }
    }
    Ok(Lexed { toks })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    frame: &'a Frame,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NdParseError> {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(&(_, l, c)) => (l, c),
            None => (1, 1),
        };
        Err(NdParseError { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|x| x.0.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|x| &x.0)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), NdParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn world(&mut self) -> Result<World, NdParseError> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) => match self.frame.world(&w) {
                Some(x) => {
                    self.pos += 1;
                    Ok(x)
                }
                None => self.err(format!("unknown world `{w}`")),
            },
            _ => self.err("expected a world name"),
        }
    }

    fn prop(&mut self) -> Result<Prop, NdParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Prop(s), line, col)) => {
                self.pos += 1;
                parse_prop(&s).map_err(|e| NdParseError { line, col: col + e.col - 1, msg: e.msg })
            }
            _ => self.err("expected `[proposition]`"),
        }
    }

    fn table(&mut self) -> Result<BTreeMap<World, NdTerm>, NdParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut t = BTreeMap::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return self.err("unclosed `{`");
            }
            let u = self.world()?;
            let x = self.term()?;
            if t.insert(u, x).is_some() {
                return self.err(format!("world `{}` appears twice in a table", self.frame.name(u)));
            }
        }
        self.pos += 1;
        Ok(t)
    }

    fn term(&mut self) -> Result<NdTerm, NdParseError> {
        self.expect(Tok::Open, "`(`")?;
        let head = match self.next() {
            Some(Tok::Word(h)) => h,
            _ => {
                self.pos -= 1;
                return self.err("expected a rule name");
            }
        };
        let b = Box::new;
        let t = match head.as_str() {
            "hyp" => match self.peek().cloned() {
                Some(Tok::Word(n)) => match n.parse::<usize>() {
                    Ok(i) => {
                        self.pos += 1;
                        NdTerm::Hyp(i)
                    }
                    Err(_) => return self.err(format!("`{n}` is not a hypothesis index")),
                },
                _ => return self.err("expected a hypothesis index"),
            },
            "bot-e" => {
                let world = self.world()?;
                NdTerm::BotE { world, sub: b(self.term()?) }
            }
            "imp-i" => NdTerm::ImpI(b(self.term()?)),
            "imp-e" => {
                let arg_ty = self.prop()?;
                let fun = b(self.term()?);
                NdTerm::ImpE { arg_ty, fun, arg: b(self.term()?) }
            }
            "dia-i" => {
                let world = self.world()?;
                NdTerm::DiaI { world, sub: b(self.term()?) }
            }
            "dia-e" => {
                let world = self.world()?;
                let inner = self.prop()?;
                let scrutinee = b(self.term()?);
                NdTerm::DiaE { world, inner, scrutinee, table: self.table()? }
            }
            "box-i" => NdTerm::BoxI { table: self.table()? },
            "box-e" => {
                let world = self.world()?;
                let inner = self.prop()?;
                let scrutinee = b(self.term()?);
                let cont = if self.peek() == Some(&Tok::Blank) {
                    self.pos += 1;
                    None
                } else {
                    Some(b(self.term()?))
                };
                NdTerm::BoxE { world, inner, scrutinee, cont }
            }
            other => {
                self.pos -= 1;
                return self.err(format!("unknown rule `{other}`"));
            }
        };
        self.expect(Tok::Close, "`)`")?;
        Ok(t)
    }
}

/// Parses a proof term; world names are resolved against `frame`.
pub fn parse_nd(src: &str, frame: &Frame) -> Result<NdTerm, NdParseError> {
    let Lexed { toks } = lex(src)?;
    let mut p = Parser { toks, pos: 0, frame };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after the term");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::running_frame;

    #[test]
    fn round_trip() {
        let f = running_frame();
        let src = "(dia-e alpha [~q] (hyp 0) {beta (imp-i (hyp 1)) gamma (bot-e gamma (hyp 2))})";
        let t = parse_nd(src, &f).unwrap();
        assert_eq!(t.display(&f).to_string(), src);
        let src = "(box-e alpha [dia q] (imp-e [q] (hyp 0) (hyp 1)) _)";
        let t = parse_nd(src, &f).unwrap();
        assert_eq!(parse_nd(&t.display(&f).to_string(), &f).unwrap(), t);
        let t = parse_nd("(box-i {}) ; vacuous", &f).unwrap();
        assert_eq!(t, NdTerm::BoxI { table: BTreeMap::new() });
    }

    #[test]
    fn errors_are_positioned() {
        let f = running_frame();
        let e = parse_nd("(dia-i delta (hyp 0))", &f).unwrap_err();
        assert_eq!((e.line, e.col), (1, 8));
        assert!(e.msg.contains("delta"));
        let e = parse_nd("(hyp 0", &f).unwrap_err();
        assert!(e.msg.contains("`)`"));
        let e = parse_nd("(frob 1)", &f).unwrap_err();
        assert!(e.msg.contains("frob"));
        let e = parse_nd("(imp-e [q ->] (hyp 0) (hyp 1))", &f).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
