use std::collections::BTreeSet;
use std::fmt;

use super::frame::{Frame, Reach, World};
use super::prop::Prop;

/// `A[w]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Judgment {
    pub prop: Prop,
    pub world: World,
}

impl Judgment {
    pub fn new(prop: Prop, world: World) -> Self {
        Judgment { prop, world }
    }

    pub fn display<'a>(&'a self, frame: &'a Frame) -> impl fmt::Display + 'a {
        DisplayJudgment { j: self, frame }
    }
}

struct DisplayJudgment<'a> {
    j: &'a Judgment,
    frame: &'a Frame,
}

impl fmt::Display for DisplayJudgment<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.j.prop, self.frame.name(self.j.world))
    }
}

/// A set of judgments in canonical order. Contraction and exchange are
/// identities; extension `Γ, A[w]` is set insertion.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Context(BTreeSet<Judgment>);

impl Context {
    pub fn new() -> Self {
        Context(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: &Judgment) -> bool {
        self.0.contains(j)
    }

    pub fn insert(&mut self, j: Judgment) -> bool {
        self.0.insert(j)
    }

    pub fn remove(&mut self, j: &Judgment) -> bool {
        self.0.remove(j)
    }

    /// `Γ, A[w]` as a new context.
    pub fn with(&self, j: Judgment) -> Context {
        let mut c = self.clone();
        c.insert(j);
        c
    }

    pub fn iter(&self) -> impl Iterator<Item = &Judgment> + '_ {
        self.0.iter()
    }

    /// Position of a judgment in canonical order.
    pub fn position(&self, j: &Judgment) -> Option<usize> {
        self.0.iter().position(|x| x == j)
    }

    pub fn to_vec(&self) -> Vec<Judgment> {
        self.0.iter().cloned().collect()
    }

    /// Judgments at worlds `w'` with `w ≺* w'`; the only part of a context
    /// that can matter for a goal at `w`.
    pub fn restrict_above(&self, frame: &Frame, w: World) -> Context {
        self.0
            .iter()
            .filter(|j| frame.reaches(w, j.world, Reach::Star))
            .cloned()
            .collect()
    }

    pub fn display<'a>(&'a self, frame: &'a Frame) -> impl fmt::Display + 'a {
        DisplayContext { ctx: self, frame }
    }
}

struct DisplayContext<'a> {
    ctx: &'a Context,
    frame: &'a Frame,
}

impl fmt::Display for DisplayContext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            return f.write_str("·");
        }
        for (i, j) in self.ctx.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", j.display(self.frame))?;
        }
        Ok(())
    }
}

impl FromIterator<Judgment> for Context {
    fn from_iter<T: IntoIterator<Item = Judgment>>(iter: T) -> Self {
        Context(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a Judgment;
    type IntoIter = std::collections::btree_set::Iter<'a, Judgment>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The indexed order `Γ ⊆_w Γ'`: anything may be added at `w` itself, nothing
/// may change at worlds strictly accessible from `w`, and worlds outside the
/// `≺*`-range of `w` are unconstrained.
pub fn ctx_leq(frame: &Frame, lhs: &Context, rhs: &Context, w: World) -> bool {
    let grows = lhs
        .iter()
        .filter(|j| frame.reaches(w, j.world, Reach::Star))
        .all(|j| rhs.contains(j));
    let fixed_above = rhs
        .iter()
        .filter(|j| frame.reaches(w, j.world, Reach::Plus))
        .all(|j| lhs.contains(j));
    grows && fixed_above
}
