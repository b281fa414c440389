//! Two-strata Datalog with stratified negation, evaluated bottom-up and
//! cross-checked through the focused CPL* prover.
//!
//! Stratum-1 atoms live at world `gamma`, stratum-2 atoms at `beta`, with
//! `beta ≺ gamma`. A stratum-1 clause `q :- q1, ..., qn` becomes
//! `↓(q1 ⊃ ... ⊃ qn ⊃ ↑q)[gamma]`; a stratum-2 clause becomes
//! `↓(a1• ⊃ ... ⊃ an• ⊃ ↑p)[beta]` where stratum-1 premises are boxed and
//! negated ones become `↓(□q ⊃ ↑⊥)`.

mod eval;
mod gen;
mod ground;
mod parse;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use eval::{
    crosscheck, immediate, query, saturate, saturate_with, translate, Database, Event, Mode,
    SaturateOptions,
};
pub use gen::random_program;
pub use ground::{ground, stratify, GroundClause, GroundProgram, StratifiedProgram, Stratum};
pub use parse::{parse_atom, parse_program};

use crate::syntax::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Arc<str>),
    Var(Arc<str>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Arc<str>,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
    /// 1-based source line of the clause head.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

/// A variable-free atom. Its identity is the canonical string `p(c1,...,cn)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Arc<str>,
    pub args: Vec<Arc<str>>,
}

impl GroundAtom {
    pub fn new(pred: &str, args: &[&str]) -> Self {
        GroundAtom { pred: Arc::from(pred), args: args.iter().map(|&a| Arc::from(a)).collect() }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => f.write_str(c),
        }
    }
}

fn write_atom<T: fmt::Display>(f: &mut fmt::Formatter<'_>, pred: &str, args: &[T]) -> fmt::Result {
    f.write_str(pred)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.pred, &self.args)
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.pred, &self.args)
    }
}

impl fmt::Debug for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: variable `{var}` in the head of `{clause}` does not occur in its body")]
    RangeRestriction { line: usize, var: String, clause: String },
    #[error("the program has variables but no constants to instantiate them with")]
    EmptyDomain,
    #[error("unstratifiable: line {line}: `{clause}` negates `{pred}`, which depends on its own head")]
    Unstratifiable { line: usize, clause: String, pred: String },
    #[error("needs more than two strata: line {line}: `{clause}` puts `{pred}` in stratum 3")]
    TooManyStrata { line: usize, clause: String, pred: String },
}
