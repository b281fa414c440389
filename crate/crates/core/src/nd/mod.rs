//! Natural-deduction proof terms for both logics.
//!
//! Hypotheses are positional: index `i` names the `i`-th judgment of the
//! canonical context order, and every `⊃I` appends its hypothesis at the
//! end. Higher-order premises are finite tables keyed by successor world.
//! Their key sets are checked against provability verdicts from the
//! deciders (the sequent decider for CPL, the focused one for CPL*).

mod ops;
mod text;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Context, Frame, Judgment, Prop, Reach, World};
use crate::Logic;

pub use ops::{expand_neutral, extract_nd, reduce_redex, subst_nd, weaken_nd};
pub use text::{parse_nd, NdParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NdTerm {
    Hyp(usize),
    /// `sub` proves `⊥[world]`.
    BotE { world: World, sub: Box<NdTerm> },
    ImpI(Box<NdTerm>),
    /// `fun` proves `arg_ty ⊃ C`, `arg` proves `arg_ty`.
    ImpE { arg_ty: Prop, fun: Box<NdTerm>, arg: Box<NdTerm> },
    DiaI { world: World, sub: Box<NdTerm> },
    /// `scrutinee` proves `◇inner[world]`; one continuation per witness.
    DiaE { world: World, inner: Prop, scrutinee: Box<NdTerm>, table: BTreeMap<World, NdTerm> },
    BoxI { table: BTreeMap<World, NdTerm> },
    /// `scrutinee` proves `□inner[world]`; a continuation exactly when
    /// `inner` holds at every successor.
    BoxE { world: World, inner: Prop, scrutinee: Box<NdTerm>, cont: Option<Box<NdTerm>> },
}

impl NdTerm {
    pub fn rule_name(&self) -> &'static str {
        match self {
            NdTerm::Hyp(_) => "hyp",
            NdTerm::BotE { .. } => "bot-e",
            NdTerm::ImpI(_) => "imp-i",
            NdTerm::ImpE { .. } => "imp-e",
            NdTerm::DiaI { .. } => "dia-i",
            NdTerm::DiaE { .. } => "dia-e",
            NdTerm::BoxI { .. } => "box-i",
            NdTerm::BoxE { .. } => "box-e",
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            NdTerm::Hyp(_) => 0,
            NdTerm::BotE { sub, .. } | NdTerm::ImpI(sub) | NdTerm::DiaI { sub, .. } => sub.size(),
            NdTerm::ImpE { fun, arg, .. } => fun.size() + arg.size(),
            NdTerm::DiaE { scrutinee, table, .. } => {
                scrutinee.size() + table.values().map(NdTerm::size).sum::<usize>()
            }
            NdTerm::BoxI { table } => table.values().map(NdTerm::size).sum(),
            NdTerm::BoxE { scrutinee, cont, .. } => scrutinee.size() + cont.as_ref().map_or(0, |c| c.size()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("substitution world side condition fails: {0}")]
    SideCondition(String),
    #[error("contexts are not related by the indexed order at {0}")]
    Order(String),
    #[error("no redex")]
    NoRedex,
    #[error("expansion is only defined at ⊃, ◇ and □, not at `{0}`")]
    UnsupportedShape(Prop),
    #[error("no certificate is available for {0}")]
    CertificateUnavailable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Judgment list seen by a subterm: the canonical context followed by the
/// hypotheses bound on the way down.
pub(crate) type Hyps = Vec<Judgment>;

pub(crate) fn hyps_of(ctx: &Context) -> Hyps {
    ctx.to_vec()
}

pub(crate) fn as_context(hyps: &Hyps) -> Context {
    hyps.iter().cloned().collect()
}

/// True iff `term` derives `Γ ⊢ A[w]` in `logic`.
pub fn check_nd(logic: Logic, frame: &Frame, ctx: &Context, term: &NdTerm, a: &Prop, w: World) -> bool {
    check_nd_diag(logic, frame, ctx, term, a, w).is_ok()
}

/// Like [`check_nd`], describing the first node that fails.
pub fn check_nd_diag(
    logic: Logic,
    frame: &Frame,
    ctx: &Context,
    term: &NdTerm,
    a: &Prop,
    w: World,
) -> Result<(), String> {
    let mut hyps = hyps_of(ctx);
    Checker { logic, frame }.check(&mut hyps, term, a, w, "root")
}

struct Checker<'a> {
    logic: Logic,
    frame: &'a Frame,
}

impl Checker<'_> {
    /// Where an elimination at `source` may conclude.
    fn conclusion_ok(&self, w: World, source: World) -> bool {
        match self.logic {
            Logic::Cpl => w == source,
            Logic::CplStar => self.frame.reaches(w, source, Reach::Star),
        }
    }

    fn witnesses(&self, hyps: &Hyps, inner: &Prop, source: World) -> Vec<World> {
        let ctx = as_context(hyps);
        self.frame
            .successors(source)
            .iter()
            .copied()
            .filter(|&u| self.logic.provable(self.frame, &ctx, inner, u))
            .collect()
    }

    fn check(&self, hyps: &mut Hyps, term: &NdTerm, a: &Prop, w: World, path: &str) -> Result<(), String> {
        let frame = self.frame;
        let here = format!("{path}/{}", term.rule_name());
        let fail = |msg: String| Err(format!("{here} at `{a}` @ {}: {msg}", frame.name(w)));
        match term {
            NdTerm::Hyp(i) => match hyps.get(*i) {
                Some(j) if j.prop == *a && j.world == w => Ok(()),
                Some(j) => fail(format!("hypothesis {i} is `{}`", j.display(frame))),
                None => fail(format!("hypothesis {i} out of range ({} in scope)", hyps.len())),
            },
            NdTerm::BotE { world, sub } => {
                if !self.conclusion_ok(w, *world) {
                    return fail(format!("cannot conclude from ⊥ at {}", frame.name(*world)));
                }
                self.check(hyps, sub, &Prop::Bot, *world, &here)
            }
            NdTerm::ImpI(body) => {
                let Prop::Imp(b, c) = a else { return fail("goal is not an implication".into()) };
                hyps.push(Judgment::new((**b).clone(), w));
                let r = self.check(hyps, body, c, w, &here);
                hyps.pop();
                r
            }
            NdTerm::ImpE { arg_ty, fun, arg } => {
                let f_ty = Prop::imp(arg_ty.clone(), a.clone());
                self.check(hyps, fun, &f_ty, w, &here)?;
                self.check(hyps, arg, arg_ty, w, &here)
            }
            NdTerm::DiaI { world, sub } => {
                let Prop::Dia(b) = a else { return fail("goal is not ◇".into()) };
                if !frame.successors(w).contains(world) {
                    return fail(format!("{} is not a successor", frame.name(*world)));
                }
                self.check(hyps, sub, b, *world, &here)
            }
            NdTerm::BoxI { table } => {
                let Prop::Box(b) = a else { return fail("goal is not □".into()) };
                if !table.keys().copied().eq(frame.successors(w).iter().copied()) {
                    return fail("table does not cover exactly the successors".into());
                }
                for (&u, t) in table {
                    self.check(hyps, t, b, u, &here)?;
                }
                Ok(())
            }
            NdTerm::DiaE { world, inner, scrutinee, table } => {
                if !self.conclusion_ok(w, *world) {
                    return fail(format!("cannot conclude from ◇ at {}", frame.name(*world)));
                }
                self.check(hyps, scrutinee, &Prop::dia(inner.clone()), *world, &here)?;
                let expected = self.witnesses(hyps, inner, *world);
                if !table.keys().copied().eq(expected.iter().copied()) {
                    return fail("witness table differs from the witness set".into());
                }
                for t in table.values() {
                    self.check(hyps, t, a, w, &here)?;
                }
                Ok(())
            }
            NdTerm::BoxE { world, inner, scrutinee, cont } => {
                if !self.conclusion_ok(w, *world) {
                    return fail(format!("cannot conclude from □ at {}", frame.name(*world)));
                }
                self.check(hyps, scrutinee, &Prop::boxed(inner.clone()), *world, &here)?;
                let all = self.witnesses(hyps, inner, *world).len() == frame.successors(*world).len();
                match (all, cont) {
                    (false, None) => Ok(()),
                    (true, Some(c)) => self.check(hyps, c, a, w, &here),
                    (true, None) => fail("missing continuation".into()),
                    (false, Some(_)) => fail("continuation given although some successor refutes the body".into()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_prop, running_frame};

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    #[test]
    fn identity_function() {
        let f = Frame::new(&["w"], &[]).unwrap();
        let w = f.world("w").unwrap();
        let t = NdTerm::ImpI(Box::new(NdTerm::Hyp(0)));
        for logic in [Logic::Cpl, Logic::CplStar] {
            assert!(check_nd(logic, &f, &Context::new(), &t, &p("a -> a"), w));
        }
    }

    #[test]
    fn empty_witness_table_for_the_running_example() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("dia q"), a)]);
        let t = NdTerm::DiaE {
            world: a,
            inner: p("q"),
            scrutinee: Box::new(NdTerm::Hyp(0)),
            table: BTreeMap::new(),
        };
        assert!(check_nd(Logic::Cpl, &f, &ctx, &t, &Prop::Bot, a));
        assert!(check_nd(Logic::CplStar, &f, &ctx, &t, &Prop::Bot, a));
    }

    #[test]
    fn box_intro_at_a_top_world() {
        let f = running_frame();
        let g = f.world("gamma").unwrap();
        let t = NdTerm::BoxI { table: BTreeMap::new() };
        assert!(check_nd(Logic::Cpl, &f, &Context::new(), &t, &p("box q"), g));
    }

    #[test]
    fn dia_intro_world_mismatch() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let g = f.world("gamma").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("q"), g)]);
        let t = NdTerm::DiaI { world: b, sub: Box::new(NdTerm::Hyp(0)) };
        assert!(!check_nd(Logic::Cpl, &f, &ctx, &t, &p("dia q"), a));
        let err = check_nd_diag(Logic::Cpl, &f, &ctx, &t, &p("dia q"), a).unwrap_err();
        assert!(err.contains("root/dia-i/hyp"), "{err}");
    }

    #[test]
    fn detethered_elimination_concludes_below() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let ctx = Context::from_iter([Judgment::new(Prop::Bot, b)]);
        let t = NdTerm::BotE { world: b, sub: Box::new(NdTerm::Hyp(0)) };
        assert!(!check_nd(Logic::Cpl, &f, &ctx, &t, &p("q"), a));
        assert!(check_nd(Logic::CplStar, &f, &ctx, &t, &p("q"), a));
    }
}
