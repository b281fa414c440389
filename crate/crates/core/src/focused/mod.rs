//! The focused, polarized sequent calculus for CPL*.
//!
//! Three sequent forms: right focus `Γ ⊢ [A+][w]`, inversion
//! `Γ; Ω ⊢ C−[w]` with `Ω` empty or a single judgment, and left focus
//! `Γ; [A−][w'] ⊢ C−[w]`. [`decide_foc`] searches for proofs,
//! [`check_foc`] re-validates them, and [`prove_neg`] is the CPL*
//! provability entry point for unpolarized sequents.

mod check;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{
    polarize_ctx, polarize_neg, AtomPolarity, Context, Frame, Neg, PolContext, PolJudgment,
    PolProp, Pos, Prop, Reach, World,
};
use crate::ProofResult;

pub use check::{check_foc, FocStats};
pub use search::FocProver;

/// Stability of a polarized proposition: `Q+`, `↓A−` (positive) and `Q−`,
/// `↑A+` (negative). Everything else must be inverted.
pub fn is_stable(p: &PolProp) -> bool {
    p.is_stable()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FocSequent {
    RFoc {
        ctx: PolContext,
        focus: Pos,
        world: World,
    },
    Inv {
        ctx: PolContext,
        omega: Option<PolJudgment>,
        goal: Neg,
        world: World,
    },
    LFoc {
        ctx: PolContext,
        focus: Neg,
        focus_world: World,
        goal: Neg,
        world: World,
    },
}

impl FocSequent {
    /// `Γ; · ⊢ C−[w]`.
    pub fn neutral(ctx: PolContext, goal: Neg, world: World) -> Self {
        FocSequent::Inv { ctx, omega: None, goal, world }
    }

    pub fn ctx(&self) -> &PolContext {
        match self {
            FocSequent::RFoc { ctx, .. }
            | FocSequent::Inv { ctx, .. }
            | FocSequent::LFoc { ctx, .. } => ctx,
        }
    }

    pub fn world(&self) -> World {
        match self {
            FocSequent::RFoc { world, .. }
            | FocSequent::Inv { world, .. }
            | FocSequent::LFoc { world, .. } => *world,
        }
    }

    /// Checks that `Ω` and a left focus sit `≺*`-above the goal world.
    pub fn validate(&self, frame: &Frame) -> Result<(), String> {
        let w = self.world();
        let above = |v: World| frame.reaches(w, v, Reach::Star);
        match self {
            FocSequent::Inv { omega: Some(j), .. } if !above(j.world) => Err(format!(
                "inversion context at {} is not above the goal world {}",
                frame.name(j.world),
                frame.name(w)
            )),
            FocSequent::LFoc { focus_world, .. } if !above(*focus_world) => Err(format!(
                "left focus at {} is not above the goal world {}",
                frame.name(*focus_world),
                frame.name(w)
            )),
            _ => Ok(()),
        }
    }
}

/// A focused derivation, one constructor per rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FocProof {
    QR,
    DownR(Arc<FocProof>),
    DiaR {
        successor: World,
        sub: Arc<FocProof>,
    },
    BoxR {
        subs: BTreeMap<World, Arc<FocProof>>,
    },
    ImpR(Arc<FocProof>),
    /// Moves a stable `Ω` into `Γ`.
    L(Arc<FocProof>),
    DownL {
        principal: PolJudgment,
        sub: Arc<FocProof>,
    },
    BotL,
    DiaL {
        witnesses: BTreeMap<World, Arc<FocProof>>,
    },
    BoxL {
        continuation: Option<Arc<FocProof>>,
    },
    UpR(Arc<FocProof>),
    QL,
    UpL(Arc<FocProof>),
    ImpL {
        arg: Arc<FocProof>,
        cont: Arc<FocProof>,
    },
}

impl FocProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            FocProof::QR => "QR+",
            FocProof::DownR(_) => "↓R",
            FocProof::DiaR { .. } => "◇R",
            FocProof::BoxR { .. } => "□R",
            FocProof::ImpR(_) => "⊃R",
            FocProof::L(_) => "L",
            FocProof::DownL { .. } => "↓L",
            FocProof::BotL => "⊥L",
            FocProof::DiaL { .. } => "◇L",
            FocProof::BoxL { .. } => "□L",
            FocProof::UpR(_) => "↑R",
            FocProof::QL => "QL−",
            FocProof::UpL(_) => "↑L",
            FocProof::ImpL { .. } => "⊃L",
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            FocProof::QR | FocProof::BotL | FocProof::QL => 0,
            FocProof::DownR(p)
            | FocProof::ImpR(p)
            | FocProof::L(p)
            | FocProof::UpR(p)
            | FocProof::UpL(p)
            | FocProof::DiaR { sub: p, .. }
            | FocProof::DownL { sub: p, .. } => p.size(),
            FocProof::BoxR { subs: t } | FocProof::DiaL { witnesses: t } => {
                t.values().map(|p| p.size()).sum()
            }
            FocProof::BoxL { continuation } => continuation.as_ref().map_or(0, |p| p.size()),
            FocProof::ImpL { arg, cont } => arg.size() + cont.size(),
        }
    }
}

impl fmt::Display for FocProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule_name())
    }
}

/// Decides a focused sequent with the default configuration.
pub fn decide_foc(frame: &Frame, seq: &FocSequent) -> ProofResult<FocProof> {
    FocProver::new()
        .decide(frame, seq)
        .expect("unbounded search always terminates")
}

/// `Γ ⊢* A[w]` via `Γ⊛; · ⊢ A⊖[w]`, all atoms positive.
pub fn prove_neg(frame: &Frame, ctx: &Context, a: &Prop, w: World) -> ProofResult<FocProof> {
    decide_foc(frame, &polarized_sequent(ctx, a, w, &AtomPolarity::all_positive()))
}

/// [`prove_neg`] under an explicit atom-polarity table.
pub fn prove_neg_with(
    frame: &Frame,
    ctx: &Context,
    a: &Prop,
    w: World,
    pol: &AtomPolarity,
) -> ProofResult<FocProof> {
    decide_foc(frame, &polarized_sequent(ctx, a, w, pol))
}

pub fn provable_star(frame: &Frame, ctx: &Context, a: &Prop, w: World) -> bool {
    prove_neg(frame, ctx, a, w).is_provable()
}

/// The sequent `Γ⊛; · ⊢ A⊖[w]`.
pub fn polarized_sequent(ctx: &Context, a: &Prop, w: World, pol: &AtomPolarity) -> FocSequent {
    FocSequent::neutral(polarize_ctx(ctx, pol), polarize_neg(a, pol), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_prop, running_frame, Judgment};

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    #[test]
    fn stability_table() {
        assert!(is_stable(&PolProp::Pos(Pos::atom("q"))));
        assert!(is_stable(&PolProp::Neg(Neg::up(Pos::atom("q")))));
        assert!(!is_stable(&PolProp::Pos(Pos::dia(Pos::atom("q")))));
        assert!(!is_stable(&PolProp::Pos(Pos::Bot)));
        assert!(!is_stable(&PolProp::Neg(Neg::imp(Pos::Bot, Neg::atom("q")))));
    }

    #[test]
    fn atom_by_up_right() {
        let f = Frame::new(&["w"], &[]).unwrap();
        let w = f.world("w").unwrap();
        let mut ctx = PolContext::new();
        ctx.insert(PolJudgment::new(Pos::atom("q"), w)).unwrap();
        let seq = FocSequent::neutral(ctx.clone(), Neg::up(Pos::atom("q")), w);
        let r = decide_foc(&f, &seq);
        assert_eq!(r.proof(), Some(&FocProof::UpR(Arc::new(FocProof::QR))));
        let rf = FocSequent::RFoc { ctx: PolContext::new(), focus: Pos::atom("q"), world: w };
        assert_eq!(decide_foc(&f, &rf), ProofResult::Refuted);
    }

    #[test]
    fn running_example_inside_focusing() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let mut ctx = PolContext::new();
        let hyp = Pos::down(Neg::up(Pos::dia(Pos::atom("q"))));
        ctx.insert(PolJudgment::new(hyp, a)).unwrap();
        let seq = FocSequent::neutral(ctx, Neg::up(Pos::Bot), a);
        let proof = decide_foc(&f, &seq).into_proof().expect("provable");
        let FocProof::DownL { sub, .. } = &proof else { panic!("{proof:?}") };
        let FocProof::UpL(inner) = &**sub else { panic!() };
        assert!(matches!(&**inner, FocProof::DiaL { witnesses } if witnesses.is_empty()));
        check_foc(&f, &seq, &proof).unwrap();
    }

    #[test]
    fn prove_neg_examples() {
        let f = running_frame();
        for w in f.worlds() {
            assert!(provable_star(&f, &Context::new(), &p("~dia bot"), w));
            assert!(provable_star(&f, &Context::new(), &p("q -> q"), w));
        }
        let a = f.world("alpha").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("dia q"), a)]);
        assert!(provable_star(&f, &ctx, &Prop::Bot, a));
    }

    #[test]
    fn negation_encoding_tracks_provability_above() {
        // Focusing on ↓(□Q ⊃ ↑⊥) at β succeeds exactly when Q is not provable at γ.
        let f = running_frame();
        let b = f.world("beta").unwrap();
        let g = f.world("gamma").unwrap();
        let neg_q = Pos::down(Neg::imp(Pos::boxed(Pos::atom("q")), Neg::up(Pos::Bot)));
        let goal = FocSequent::RFoc { ctx: PolContext::new(), focus: neg_q.clone(), world: b };
        assert!(decide_foc(&f, &goal).is_provable());
        let mut ctx = PolContext::new();
        ctx.insert(PolJudgment::new(Pos::atom("q"), g)).unwrap();
        let goal = FocSequent::RFoc { ctx, focus: neg_q, world: b };
        assert!(!decide_foc(&f, &goal).is_provable());
    }

    #[test]
    fn validate_rejects_low_omega() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let seq = FocSequent::Inv {
            ctx: PolContext::new(),
            omega: Some(PolJudgment::new(Pos::Bot, a)),
            goal: Neg::up(Pos::Bot),
            world: b,
        };
        assert!(seq.validate(&f).is_err());
    }
}
