//! Polarized propositions, the polarization translation and erasure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::context::{Context, Judgment};
use super::frame::{Frame, World};
use super::prop::Prop;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Atom(Arc<str>),
    Down(Arc<Neg>),
    Bot,
    Dia(Arc<Pos>),
    Box(Arc<Pos>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Neg {
    Atom(Arc<str>),
    Up(Arc<Pos>),
    Imp(Arc<Pos>, Arc<Neg>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PolProp {
    Pos(Pos),
    Neg(Neg),
}

impl Pos {
    pub fn atom(name: &str) -> Pos {
        Pos::Atom(Arc::from(name))
    }

    pub fn down(n: Neg) -> Pos {
        Pos::Down(Arc::new(n))
    }

    pub fn dia(p: Pos) -> Pos {
        Pos::Dia(Arc::new(p))
    }

    pub fn boxed(p: Pos) -> Pos {
        Pos::Box(Arc::new(p))
    }

    /// `Q+` and `↓A−` are the stable positives; everything else is inverted.
    pub fn is_stable(&self) -> bool {
        matches!(self, Pos::Atom(_) | Pos::Down(_))
    }
}

impl Neg {
    pub fn atom(name: &str) -> Neg {
        Neg::Atom(Arc::from(name))
    }

    pub fn up(p: Pos) -> Neg {
        Neg::Up(Arc::new(p))
    }

    pub fn imp(a: Pos, b: Neg) -> Neg {
        Neg::Imp(Arc::new(a), Arc::new(b))
    }

    /// `Q−` and `↑A+`.
    pub fn is_stable(&self) -> bool {
        matches!(self, Neg::Atom(_) | Neg::Up(_))
    }
}

impl PolProp {
    pub fn is_stable(&self) -> bool {
        match self {
            PolProp::Pos(p) => p.is_stable(),
            PolProp::Neg(n) => n.is_stable(),
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pos::Atom(n) => write!(f, "{n}+"),
            Pos::Down(n) => match &**n {
                Neg::Imp(..) => write!(f, "↓({n})"),
                _ => write!(f, "↓{n}"),
            },
            Pos::Bot => f.write_str("⊥"),
            Pos::Dia(p) => write!(f, "◇{p}"),
            Pos::Box(p) => write!(f, "□{p}"),
        }
    }
}

impl fmt::Display for Neg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Neg::Atom(n) => write!(f, "{n}-"),
            Neg::Up(p) => write!(f, "↑{p}"),
            Neg::Imp(a, b) => write!(f, "{a} ⊃ {b}"),
        }
    }
}

impl fmt::Debug for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl fmt::Debug for Neg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarityError {
    #[error("atom `{0}` used with both polarities")]
    Clash(String),
    #[error("context judgment `{0}` is not stable-positive")]
    Unstable(String),
}

/// Per-problem atom polarity declarations. Undeclared atoms are positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomPolarity {
    table: BTreeMap<Arc<str>, Polarity>,
}

impl AtomPolarity {
    pub fn all_positive() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, atom: &str, pol: Polarity) -> Result<(), PolarityError> {
        match self.table.get(atom) {
            Some(&old) if old != pol => Err(PolarityError::Clash(atom.to_string())),
            _ => {
                self.table.insert(Arc::from(atom), pol);
                Ok(())
            }
        }
    }

    pub fn of(&self, atom: &str) -> Polarity {
        self.table.get(atom).copied().unwrap_or(Polarity::Positive)
    }

    /// Reads polarities off already-polarized material, rejecting an atom
    /// that occurs both as `Q+` and `Q−`.
    pub fn infer<'a>(items: impl IntoIterator<Item = &'a PolProp>) -> Result<Self, PolarityError> {
        let mut table = AtomPolarity::default();
        for item in items {
            match item {
                PolProp::Pos(p) => table.scan_pos(p)?,
                PolProp::Neg(n) => table.scan_neg(n)?,
            }
        }
        Ok(table)
    }

    fn scan_pos(&mut self, p: &Pos) -> Result<(), PolarityError> {
        match p {
            Pos::Atom(n) => self.declare(n, Polarity::Positive),
            Pos::Down(n) => self.scan_neg(n),
            Pos::Bot => Ok(()),
            Pos::Dia(a) | Pos::Box(a) => self.scan_pos(a),
        }
    }

    fn scan_neg(&mut self, n: &Neg) -> Result<(), PolarityError> {
        match n {
            Neg::Atom(a) => self.declare(a, Polarity::Negative),
            Neg::Up(p) => self.scan_pos(p),
            Neg::Imp(a, b) => {
                self.scan_pos(a)?;
                self.scan_neg(b)
            }
        }
    }
}

/// `A⊕`.
pub fn polarize_pos(a: &Prop, pol: &AtomPolarity) -> Pos {
    match a {
        Prop::Atom(n) => match pol.of(n) {
            Polarity::Positive => Pos::Atom(n.clone()),
            Polarity::Negative => Pos::down(Neg::Atom(n.clone())),
        },
        Prop::Bot => Pos::Bot,
        Prop::Dia(b) => Pos::dia(polarize_pos(b, pol)),
        Prop::Box(b) => Pos::boxed(polarize_pos(b, pol)),
        Prop::Imp(b, c) => Pos::down(Neg::imp(polarize_pos(b, pol), polarize_neg(c, pol))),
    }
}

/// `A⊖`.
pub fn polarize_neg(a: &Prop, pol: &AtomPolarity) -> Neg {
    match a {
        Prop::Atom(n) => match pol.of(n) {
            Polarity::Positive => Neg::up(Pos::Atom(n.clone())),
            Polarity::Negative => Neg::Atom(n.clone()),
        },
        Prop::Bot => Neg::up(Pos::Bot),
        Prop::Dia(_) | Prop::Box(_) => Neg::up(polarize_pos(a, pol)),
        Prop::Imp(b, c) => Neg::imp(polarize_pos(b, pol), polarize_neg(c, pol)),
    }
}

/// The context translation: stable `A⊕` is kept, anything else becomes `↓(A⊖)`.
pub fn polarize_hyp(a: &Prop, pol: &AtomPolarity) -> Pos {
    let p = polarize_pos(a, pol);
    if p.is_stable() {
        p
    } else {
        Pos::down(polarize_neg(a, pol))
    }
}

/// `Γ⊛`, judgment by judgment.
pub fn polarize_ctx(ctx: &Context, pol: &AtomPolarity) -> PolContext {
    let mut out = PolContext::new();
    for j in ctx {
        out.insert(PolJudgment::new(polarize_hyp(&j.prop, pol), j.world))
            .expect("context polarization yields stable positives");
    }
    out
}

pub fn erase_pos(p: &Pos) -> Prop {
    match p {
        Pos::Atom(n) => Prop::Atom(n.clone()),
        Pos::Down(n) => erase_neg(n),
        Pos::Bot => Prop::Bot,
        Pos::Dia(a) => Prop::dia(erase_pos(a)),
        Pos::Box(a) => Prop::boxed(erase_pos(a)),
    }
}

pub fn erase_neg(n: &Neg) -> Prop {
    match n {
        Neg::Atom(a) => Prop::Atom(a.clone()),
        Neg::Up(p) => erase_pos(p),
        Neg::Imp(a, b) => Prop::imp(erase_pos(a), erase_neg(b)),
    }
}

pub fn erase(p: &PolProp) -> Prop {
    match p {
        PolProp::Pos(p) => erase_pos(p),
        PolProp::Neg(n) => erase_neg(n),
    }
}

pub fn erase_ctx(ctx: &PolContext) -> Context {
    ctx.iter().map(|j| Judgment::new(erase_pos(&j.prop), j.world)).collect()
}

/// `A+[w]` with `A+` stable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PolJudgment {
    pub prop: Pos,
    pub world: World,
}

impl PolJudgment {
    pub fn new(prop: Pos, world: World) -> Self {
        PolJudgment { prop, world }
    }
}

/// A polarized context; only stable-positive judgments are admitted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PolContext(BTreeSet<PolJudgment>);

impl PolContext {
    pub fn new() -> Self {
        PolContext(BTreeSet::new())
    }

    pub fn insert(&mut self, j: PolJudgment) -> Result<bool, PolarityError> {
        if !j.prop.is_stable() {
            return Err(PolarityError::Unstable(j.prop.to_string()));
        }
        Ok(self.0.insert(j))
    }

    pub fn contains(&self, j: &PolJudgment) -> bool {
        self.0.contains(j)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PolJudgment> + '_ {
        self.0.iter()
    }

    pub fn display<'a>(&'a self, frame: &'a Frame) -> impl fmt::Display + 'a {
        DisplayPolContext { ctx: self, frame }
    }
}

impl<'a> IntoIterator for &'a PolContext {
    type Item = &'a PolJudgment;
    type IntoIter = std::collections::btree_set::Iter<'a, PolJudgment>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

struct DisplayPolContext<'a> {
    ctx: &'a PolContext,
    frame: &'a Frame,
}

impl fmt::Display for DisplayPolContext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            return f.write_str("·");
        }
        for (i, j) in self.ctx.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}[{}]", j.prop, self.frame.name(j.world))?;
        }
        Ok(())
    }
}
