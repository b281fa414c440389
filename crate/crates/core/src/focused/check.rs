//! Independent validation of focused proofs.
//!
//! The checker walks the proof against the sequent form it is supposed to
//! derive, so a rule from the wrong phase is rejected by construction. It
//! also re-asserts the world invariant at every node and recomputes the
//! witness sets of `◇L`/`□L` with the decider.

use super::search::restrict_pol;
use super::{decide_foc, FocProof, FocSequent};
use crate::syntax::{Frame, Neg, PolContext, PolJudgment, Pos, Reach, World};

/// Node counts gathered while checking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FocStats {
    pub nodes: usize,
    pub inversion_nodes: usize,
    pub max_omega: usize,
}

pub fn check_foc(frame: &Frame, seq: &FocSequent, proof: &FocProof) -> Result<FocStats, String> {
    seq.validate(frame)?;
    let mut c = Checker { frame, stats: FocStats::default() };
    match seq {
        FocSequent::RFoc { ctx, focus, world } => c.rfoc(ctx, focus, *world, proof)?,
        FocSequent::Inv { ctx, omega, goal, world } => c.inv(ctx, omega.as_ref(), goal, *world, proof)?,
        FocSequent::LFoc { ctx, focus, focus_world, goal, world } => {
            c.lfoc(ctx, focus, *focus_world, goal, *world, proof)?
        }
    }
    Ok(c.stats)
}

struct Checker<'a> {
    frame: &'a Frame,
    stats: FocStats,
}

impl Checker<'_> {
    fn err<T>(&self, proof: &FocProof, phase: &str, w: World, msg: &str) -> Result<T, String> {
        Err(format!("{} in {phase} phase at {}: {msg}", proof.rule_name(), self.frame.name(w)))
    }

    fn above(&self, w: World, v: World) -> bool {
        self.frame.reaches(w, v, Reach::Star)
    }

    /// Is `Γ; · ⊢ ↑A+[v]` provable?
    fn witness(&self, ctx: &PolContext, a: &Pos, v: World) -> bool {
        let seq = FocSequent::neutral(restrict_pol(self.frame, ctx, v), Neg::up(a.clone()), v);
        decide_foc(self.frame, &seq).is_provable()
    }

    fn rfoc(&mut self, ctx: &PolContext, a: &Pos, w: World, proof: &FocProof) -> Result<(), String> {
        self.stats.nodes += 1;
        let frame = self.frame;
        match (proof, a) {
            (FocProof::QR, Pos::Atom(_)) => {
                if ctx.contains(&PolJudgment::new(a.clone(), w)) {
                    Ok(())
                } else {
                    self.err(proof, "right-focus", w, "atom not in context at this world")
                }
            }
            (FocProof::DownR(sub), Pos::Down(n)) => self.inv(ctx, None, n, w, sub),
            (FocProof::DiaR { successor, sub }, Pos::Dia(b)) => {
                if !frame.successors(w).contains(successor) {
                    return self.err(proof, "right-focus", w, "chosen world is not a successor");
                }
                self.inv(ctx, None, &Neg::Up(b.clone()), *successor, sub)
            }
            (FocProof::BoxR { subs }, Pos::Box(b)) => {
                if !subs.keys().copied().eq(frame.successors(w).iter().copied()) {
                    return self.err(proof, "right-focus", w, "table does not cover exactly the successors");
                }
                let up = Neg::Up(b.clone());
                for (&v, p) in subs {
                    self.inv(ctx, None, &up, v, p)?;
                }
                Ok(())
            }
            _ => self.err(proof, "right-focus", w, &format!("does not apply to {a}")),
        }
    }

    fn inv(
        &mut self,
        ctx: &PolContext,
        omega: Option<&PolJudgment>,
        goal: &Neg,
        w: World,
        proof: &FocProof,
    ) -> Result<(), String> {
        self.stats.nodes += 1;
        self.stats.inversion_nodes += 1;
        self.stats.max_omega = self.stats.max_omega.max(omega.is_some() as usize);
        let frame = self.frame;
        if let Some(om) = omega {
            if !self.above(w, om.world) {
                return self.err(proof, "inversion", w, "inversion context below the goal world");
            }
            return match (proof, &om.prop) {
                (FocProof::L(sub), p) if p.is_stable() => {
                    let mut c2 = ctx.clone();
                    c2.insert(om.clone()).map_err(|e| e.to_string())?;
                    self.inv(&c2, None, goal, w, sub)
                }
                (FocProof::BotL, Pos::Bot) => Ok(()),
                (FocProof::DiaL { witnesses }, Pos::Dia(b)) => {
                    let expected: Vec<World> = frame
                        .successors(om.world)
                        .iter()
                        .copied()
                        .filter(|&v| self.witness(ctx, b, v))
                        .collect();
                    if !witnesses.keys().copied().eq(expected.iter().copied()) {
                        return self.err(proof, "inversion", w, "witness table differs from the witness set");
                    }
                    for p in witnesses.values() {
                        self.inv(ctx, None, goal, w, p)?;
                    }
                    Ok(())
                }
                (FocProof::BoxL { continuation }, Pos::Box(b)) => {
                    let all = frame.successors(om.world).iter().all(|&v| self.witness(ctx, b, v));
                    match (all, continuation) {
                        (false, None) => Ok(()),
                        (true, Some(p)) => self.inv(ctx, None, goal, w, p),
                        (true, None) => self.err(proof, "inversion", w, "missing continuation"),
                        (false, Some(_)) => self.err(proof, "inversion", w, "spurious continuation"),
                    }
                }
                _ => self.err(proof, "inversion", w, &format!("does not decompose {}", om.prop)),
            };
        }
        match (proof, goal) {
            (FocProof::ImpR(sub), Neg::Imp(a, b)) => {
                let om = PolJudgment::new((**a).clone(), w);
                self.inv(ctx, Some(&om), b, w, sub)
            }
            (FocProof::UpR(sub), Neg::Up(a)) => self.rfoc(ctx, a, w, sub),
            (FocProof::DownL { principal, sub }, g) if g.is_stable() => {
                if !ctx.contains(principal) {
                    return self.err(proof, "inversion", w, "principal not in context");
                }
                if !self.above(w, principal.world) {
                    return self.err(proof, "inversion", w, "principal world not above the goal world");
                }
                let Pos::Down(n) = &principal.prop else {
                    return self.err(proof, "inversion", w, "principal is not a shifted negative");
                };
                self.lfoc(ctx, n, principal.world, goal, w, sub)
            }
            _ => self.err(proof, "inversion", w, &format!("does not apply to goal {goal}")),
        }
    }

    fn lfoc(
        &mut self,
        ctx: &PolContext,
        f: &Neg,
        fw: World,
        goal: &Neg,
        w: World,
        proof: &FocProof,
    ) -> Result<(), String> {
        self.stats.nodes += 1;
        if !self.above(w, fw) {
            return self.err(proof, "left-focus", w, "focus below the goal world");
        }
        match (proof, f) {
            (FocProof::QL, Neg::Atom(_)) => {
                if f == goal && fw == w {
                    Ok(())
                } else {
                    self.err(proof, "left-focus", w, "focus and goal differ")
                }
            }
            (FocProof::UpL(sub), Neg::Up(a)) => {
                let om = PolJudgment::new((**a).clone(), fw);
                self.inv(ctx, Some(&om), goal, w, sub)
            }
            (FocProof::ImpL { arg, cont }, Neg::Imp(a, b)) => {
                self.rfoc(ctx, a, fw, arg)?;
                self.lfoc(ctx, b, fw, goal, w, cont)
            }
            _ => self.err(proof, "left-focus", w, &format!("does not apply to {f}")),
        }
    }
}
