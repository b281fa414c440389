//! Contraction-free sequent calculus (G4ip) for the implicational fragment
//! with `⊥`. Shares no code with the modal deciders.

use thiserror::Error;

use crate::syntax::Prop;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is outside the atom/bot/implication fragment")]
pub struct FragmentError(pub Prop);

/// Intuitionistic provability of `a` from no hypotheses.
pub fn ipc_decide(a: &Prop) -> Result<bool, FragmentError> {
    if let Some(m) = a.subformulas().into_iter().find(|s| matches!(s, Prop::Dia(_) | Prop::Box(_))) {
        return Err(FragmentError(m));
    }
    Ok(prove(Vec::new(), a))
}

fn prove(mut ctx: Vec<Prop>, goal: &Prop) -> bool {
    ctx.sort();
    ctx.dedup();
    if ctx.contains(&Prop::Bot) || (matches!(goal, Prop::Atom(_)) && ctx.contains(goal)) {
        return true;
    }
    if let Prop::Imp(a, b) = goal {
        ctx.push((**a).clone());
        return prove(ctx, b);
    }
    // Invertible left steps: p, p ⊃ B  ~>  p, B   and   ⊥ ⊃ B  ~>  (nothing).
    for i in 0..ctx.len() {
        if let Prop::Imp(a, b) = &ctx[i] {
            let fire = match &**a {
                Prop::Bot => Some(None),
                p @ Prop::Atom(_) if ctx.contains(p) => Some(Some((**b).clone())),
                _ => None,
            };
            if let Some(repl) = fire {
                let mut next = ctx.clone();
                next.remove(i);
                next.extend(repl);
                return prove(next, goal);
            }
        }
    }
    // (C ⊃ D) ⊃ B:  D ⊃ B ⊢ C ⊃ D  and  B ⊢ goal.
    for i in 0..ctx.len() {
        if let Prop::Imp(cd, b) = &ctx[i] {
            if let Prop::Imp(c, d) = &**cd {
                let mut rest = ctx.clone();
                rest.remove(i);
                let mut left = rest.clone();
                left.push(Prop::imp((**d).clone(), (**b).clone()));
                left.push((**c).clone());
                if prove(left, d) {
                    let mut right = rest;
                    right.push((**b).clone());
                    if prove(right, goal) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
