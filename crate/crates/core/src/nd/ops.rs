//! Substitution, weakening, reduction, expansion and certificate extraction.

use std::collections::BTreeMap;

use super::{hyps_of, Hyps, NdError, NdTerm};
use crate::cpl::{decide_cpl, CplProof};
use crate::syntax::{ctx_leq, Context, Frame, Judgment, Prop, Reach, World};
use crate::Logic;

fn map_children(t: &NdTerm, depth: usize, f: &mut impl FnMut(&NdTerm, usize) -> NdTerm) -> NdTerm {
    let b = |x: NdTerm| Box::new(x);
    match t {
        NdTerm::Hyp(i) => NdTerm::Hyp(*i),
        NdTerm::BotE { world, sub } => NdTerm::BotE { world: *world, sub: b(f(sub, depth)) },
        NdTerm::ImpI(body) => NdTerm::ImpI(b(f(body, depth + 1))),
        NdTerm::ImpE { arg_ty, fun, arg } => NdTerm::ImpE {
            arg_ty: arg_ty.clone(),
            fun: b(f(fun, depth)),
            arg: b(f(arg, depth)),
        },
        NdTerm::DiaI { world, sub } => NdTerm::DiaI { world: *world, sub: b(f(sub, depth)) },
        NdTerm::DiaE { world, inner, scrutinee, table } => NdTerm::DiaE {
            world: *world,
            inner: inner.clone(),
            scrutinee: b(f(scrutinee, depth)),
            table: table.iter().map(|(&u, t)| (u, f(t, depth))).collect(),
        },
        NdTerm::BoxI { table } => NdTerm::BoxI {
            table: table.iter().map(|(&u, t)| (u, f(t, depth))).collect(),
        },
        NdTerm::BoxE { world, inner, scrutinee, cont } => NdTerm::BoxE {
            world: *world,
            inner: inner.clone(),
            scrutinee: b(f(scrutinee, depth)),
            cont: cont.as_ref().map(|c| b(f(c, depth))),
        },
    }
}

/// Renames every hypothesis index through `r`.
fn rename(t: &NdTerm, depth: usize, r: &impl Fn(usize) -> usize) -> NdTerm {
    match t {
        NdTerm::Hyp(i) => NdTerm::Hyp(r(*i)),
        _ => map_children(t, depth, &mut |c, d| rename(c, d, r)),
    }
}

/// Shifts indices `≥ cutoff` by `by`: the term is moved under `by` new
/// hypotheses inserted at position `cutoff`.
fn shift(t: &NdTerm, cutoff: usize, by: usize) -> NdTerm {
    if by == 0 {
        return t.clone();
    }
    rename(t, 0, &|i| if i >= cutoff { i + by } else { i })
}

/// Replaces hypothesis `n` of `e` by `d`, where `d` lives in the first `n`
/// hypotheses of `e`'s context.
pub(crate) fn subst_at(e: &NdTerm, n: usize, d: &NdTerm) -> NdTerm {
    fn go(e: &NdTerm, n: usize, d: &NdTerm, depth: usize) -> NdTerm {
        match e {
            NdTerm::Hyp(i) if *i < n => NdTerm::Hyp(*i),
            NdTerm::Hyp(i) if *i == n => shift(d, n, depth),
            NdTerm::Hyp(i) => NdTerm::Hyp(i - 1),
            _ => map_children(e, depth, &mut |c, dd| go(c, n, d, dd)),
        }
    }
    go(e, n, d, 0)
}

/// Given `D : Γ ⊢ A[w]` and `E : Γ, A[w] ⊢ C[target]` (the new hypothesis
/// last), returns a derivation of `Γ ⊢ C[target]`.
#[allow(clippy::too_many_arguments)]
pub fn subst_nd(
    logic: Logic,
    frame: &Frame,
    ctx: &Context,
    d: &NdTerm,
    w: World,
    e: &NdTerm,
    target: World,
) -> Result<NdTerm, NdError> {
    let ok = match logic {
        Logic::Cpl => target == w,
        Logic::CplStar => frame.reaches(target, w, Reach::Star),
    };
    if !ok {
        return Err(NdError::SideCondition(format!(
            "cannot substitute a proof at {} into a conclusion at {}",
            frame.name(w),
            frame.name(target)
        )));
    }
    Ok(subst_at(e, ctx.len(), d))
}

/// Moves `term` from `Γ` to `Γ'`, where `Γ ⊆_w Γ'`. Witness tables are kept:
/// judgments strictly above `w` are identical in both contexts, so every
/// successor verdict is unchanged.
pub fn weaken_nd(frame: &Frame, term: &NdTerm, old: &Context, new: &Context, w: World) -> Result<NdTerm, NdError> {
    if !ctx_leq(frame, old, new, w) {
        return Err(NdError::Order(frame.name(w).to_string()));
    }
    let old_v = old.to_vec();
    let map: Vec<Option<usize>> = old_v.iter().map(|j| new.position(j)).collect();
    let (n_old, n_new) = (old.len(), new.len());
    let mut missing = None;
    let out = rename_checked(term, 0, &mut |i| {
        if i >= n_old {
            Some(i - n_old + n_new)
        } else {
            let m = map[i];
            if m.is_none() {
                missing = Some(i);
            }
            m
        }
    });
    match (out, missing) {
        (Some(t), _) => Ok(t),
        (None, Some(i)) => Err(NdError::Order(format!(
            "{}: hypothesis `{}` is used but absent from the new context",
            frame.name(w),
            old_v[i].display(frame)
        ))),
        (None, None) => unreachable!(),
    }
}

fn rename_checked(t: &NdTerm, depth: usize, r: &mut impl FnMut(usize) -> Option<usize>) -> Option<NdTerm> {
    let mut failed = false;
    let out = rename_mut(t, depth, &mut |i| match r(i) {
        Some(j) => j,
        None => {
            failed = true;
            i
        }
    });
    (!failed).then_some(out)
}

fn rename_mut(t: &NdTerm, depth: usize, r: &mut impl FnMut(usize) -> usize) -> NdTerm {
    match t {
        NdTerm::Hyp(i) => NdTerm::Hyp(r(*i)),
        _ => map_children(t, depth, &mut |c, d| rename_mut(c, d, r)),
    }
}

/// Contracts the outermost (then leftmost) introduction immediately
/// followed by its elimination. `ctx` is the context the term is checked in.
pub fn reduce_redex(ctx: &Context, term: &NdTerm) -> Result<NdTerm, NdError> {
    reduce_at(term, ctx.len()).ok_or(NdError::NoRedex)
}

fn contract(t: &NdTerm, n: usize) -> Option<NdTerm> {
    match t {
        NdTerm::ImpE { fun, arg, .. } => match &**fun {
            NdTerm::ImpI(body) => Some(subst_at(body, n, arg)),
            _ => None,
        },
        NdTerm::DiaE { scrutinee, table, .. } => match &**scrutinee {
            NdTerm::DiaI { world, .. } => table.get(world).cloned(),
            _ => None,
        },
        NdTerm::BoxE { scrutinee, cont: Some(c), .. } => match &**scrutinee {
            NdTerm::BoxI { .. } => Some((**c).clone()),
            _ => None,
        },
        _ => None,
    }
}

fn reduce_at(t: &NdTerm, n: usize) -> Option<NdTerm> {
    if let Some(r) = contract(t, n) {
        return Some(r);
    }
    let bx = |x: NdTerm| Box::new(x);
    match t {
        NdTerm::Hyp(_) => None,
        NdTerm::BotE { world, sub } => reduce_at(sub, n).map(|s| NdTerm::BotE { world: *world, sub: bx(s) }),
        NdTerm::ImpI(body) => reduce_at(body, n + 1).map(|s| NdTerm::ImpI(bx(s))),
        NdTerm::DiaI { world, sub } => reduce_at(sub, n).map(|s| NdTerm::DiaI { world: *world, sub: bx(s) }),
        NdTerm::ImpE { arg_ty, fun, arg } => {
            if let Some(f) = reduce_at(fun, n) {
                return Some(NdTerm::ImpE { arg_ty: arg_ty.clone(), fun: bx(f), arg: arg.clone() });
            }
            reduce_at(arg, n).map(|a| NdTerm::ImpE { arg_ty: arg_ty.clone(), fun: fun.clone(), arg: bx(a) })
        }
        NdTerm::BoxI { table } => {
            for (u, sub) in table {
                if let Some(s) = reduce_at(sub, n) {
                    let mut table = table.clone();
                    table.insert(*u, s);
                    return Some(NdTerm::BoxI { table });
                }
            }
            None
        }
        NdTerm::DiaE { world, inner, scrutinee, table } => {
            if let Some(s) = reduce_at(scrutinee, n) {
                return Some(NdTerm::DiaE { world: *world, inner: inner.clone(), scrutinee: bx(s), table: table.clone() });
            }
            for (u, sub) in table {
                if let Some(s) = reduce_at(sub, n) {
                    let mut table = table.clone();
                    table.insert(*u, s);
                    return Some(NdTerm::DiaE { world: *world, inner: inner.clone(), scrutinee: scrutinee.clone(), table });
                }
            }
            None
        }
        NdTerm::BoxE { world, inner, scrutinee, cont } => {
            if let Some(s) = reduce_at(scrutinee, n) {
                return Some(NdTerm::BoxE { world: *world, inner: inner.clone(), scrutinee: bx(s), cont: cont.clone() });
            }
            let c = reduce_at(cont.as_ref()?, n)?;
            Some(NdTerm::BoxE { world: *world, inner: inner.clone(), scrutinee: scrutinee.clone(), cont: Some(bx(c)) })
        }
    }
}

/// One-step η-expansion of `term : Γ ⊢ A[w]` at `⊃`, `◇` or `□`. The
/// modal cases need certificates for the witness facts; these are only
/// available for CPL.
pub fn expand_neutral(
    logic: Logic,
    frame: &Frame,
    ctx: &Context,
    term: &NdTerm,
    a: &Prop,
    w: World,
) -> Result<NdTerm, NdError> {
    let n = ctx.len();
    let cert = |b: &Prop, u: World| -> Result<NdTerm, NdError> {
        if logic == Logic::CplStar {
            return Err(NdError::CertificateUnavailable(format!("`{b}` @ {} in cpl*", frame.name(u))));
        }
        let proof = decide_cpl(frame, ctx, b, u).into_proof().expect("witness is provable");
        extract_nd(frame, ctx, b, u, &proof)
    };
    match a {
        Prop::Imp(b, _) => Ok(NdTerm::ImpI(Box::new(NdTerm::ImpE {
            arg_ty: (**b).clone(),
            fun: Box::new(shift(term, n, 1)),
            arg: Box::new(NdTerm::Hyp(n)),
        }))),
        Prop::Dia(b) => {
            let mut table = BTreeMap::new();
            for &u in frame.successors(w) {
                if logic.provable(frame, ctx, b, u) {
                    table.insert(u, NdTerm::DiaI { world: u, sub: Box::new(cert(b, u)?) });
                }
            }
            Ok(NdTerm::DiaE { world: w, inner: (**b).clone(), scrutinee: Box::new(term.clone()), table })
        }
        Prop::Box(b) => {
            let succ = frame.successors(w);
            let cont = if succ.iter().all(|&u| logic.provable(frame, ctx, b, u)) {
                let table = succ.iter().map(|&u| Ok((u, cert(b, u)?))).collect::<Result<_, NdError>>()?;
                Some(Box::new(NdTerm::BoxI { table }))
            } else {
                None
            };
            Ok(NdTerm::BoxE { world: w, inner: (**b).clone(), scrutinee: Box::new(term.clone()), cont })
        }
        Prop::Atom(_) | Prop::Bot => Err(NdError::UnsupportedShape(a.clone())),
    }
}

/// Translates a sequent proof of `Γ ⇒ C[w]` into a CPL natural-deduction
/// term for `Γ ⊢ C[w]`.
pub fn extract_nd(frame: &Frame, ctx: &Context, c: &Prop, w: World, proof: &CplProof) -> Result<NdTerm, NdError> {
    let mut hyps = hyps_of(ctx);
    Extractor { frame }.go(&mut hyps, c, w, proof)
}

struct Extractor<'a> {
    frame: &'a Frame,
}

impl Extractor<'_> {
    fn find(&self, hyps: &Hyps, j: &Judgment) -> Result<usize, NdError> {
        hyps.iter()
            .position(|h| h == j)
            .ok_or_else(|| NdError::Invalid(format!("`{}` is not in context", j.display(self.frame))))
    }

    fn with<T>(&self, hyps: &mut Hyps, j: Judgment, f: impl FnOnce(&mut Hyps) -> T) -> T {
        hyps.push(j);
        let r = f(hyps);
        hyps.pop();
        r
    }

    fn go(&self, hyps: &mut Hyps, c: &Prop, w: World, proof: &CplProof) -> Result<NdTerm, NdError> {
        let bad = |what: &str| NdError::Invalid(format!("{} does not fit `{c}`: {what}", proof.rule_name()));
        Ok(match proof {
            CplProof::Init => NdTerm::Hyp(self.find(hyps, &Judgment::new(c.clone(), w))?),
            CplProof::BotL => NdTerm::BotE {
                world: w,
                sub: Box::new(NdTerm::Hyp(self.find(hyps, &Judgment::new(Prop::Bot, w))?)),
            },
            CplProof::ImpR(sub) => {
                let Prop::Imp(a, b) = c else { return Err(bad("not an implication")) };
                let j = Judgment::new((**a).clone(), w);
                NdTerm::ImpI(Box::new(self.with(hyps, j, |h| self.go(h, b, w, sub))?))
            }
            CplProof::ImpL { principal, arg, cont } => {
                let Prop::Imp(a, b) = &principal.prop else { return Err(bad("principal")) };
                let n = hyps.len();
                let f = self.find(hyps, principal)?;
                let d = NdTerm::ImpE {
                    arg_ty: (**a).clone(),
                    fun: Box::new(NdTerm::Hyp(f)),
                    arg: Box::new(self.go(hyps, a, w, arg)?),
                };
                let j = Judgment::new((**b).clone(), w);
                let e = self.with(hyps, j, |h| self.go(h, c, w, cont))?;
                subst_at(&e, n, &d)
            }
            CplProof::DiaR { successor, sub } => {
                let Prop::Dia(a) = c else { return Err(bad("not ◇")) };
                NdTerm::DiaI { world: *successor, sub: Box::new(self.go(hyps, a, *successor, sub)?) }
            }
            CplProof::BoxR { subs } => {
                let Prop::Box(a) = c else { return Err(bad("not □")) };
                let mut table = BTreeMap::new();
                for (&u, p) in subs {
                    table.insert(u, self.go(hyps, a, u, p)?);
                }
                NdTerm::BoxI { table }
            }
            CplProof::DiaL { principal, witnesses } => {
                let Prop::Dia(a) = &principal.prop else { return Err(bad("principal")) };
                let scrutinee = Box::new(NdTerm::Hyp(self.find(hyps, principal)?));
                let mut table = BTreeMap::new();
                for (&u, p) in witnesses {
                    table.insert(u, self.go(hyps, c, w, p)?);
                }
                NdTerm::DiaE { world: w, inner: (**a).clone(), scrutinee, table }
            }
            CplProof::BoxL { principal, continuation } => {
                let Prop::Box(a) = &principal.prop else { return Err(bad("principal")) };
                let scrutinee = Box::new(NdTerm::Hyp(self.find(hyps, principal)?));
                let cont = match continuation {
                    Some(p) => Some(Box::new(self.go(hyps, c, w, p)?)),
                    None => None,
                };
                NdTerm::BoxE { world: w, inner: (**a).clone(), scrutinee, cont }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nd::check_nd;
    use crate::syntax::{parse_prop, running_frame};

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    fn hyp(i: usize) -> Box<NdTerm> {
        Box::new(NdTerm::Hyp(i))
    }

    #[test]
    fn beta_reduces_to_the_argument() {
        let f = Frame::new(&["w"], &[]).unwrap();
        let w = f.world("w").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("q"), w)]);
        let redex = NdTerm::ImpE { arg_ty: p("q"), fun: Box::new(NdTerm::ImpI(hyp(1))), arg: hyp(0) };
        assert!(check_nd(Logic::Cpl, &f, &ctx, &redex, &p("q"), w));
        assert_eq!(reduce_redex(&ctx, &redex).unwrap(), NdTerm::Hyp(0));
        assert_eq!(reduce_redex(&ctx, &NdTerm::Hyp(0)), Err(NdError::NoRedex));
    }

    #[test]
    fn dia_redex_picks_the_introduced_witness() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("q"), b), Judgment::new(p("r"), a)]);
        let k = NdTerm::Hyp(1);
        let t = NdTerm::DiaE {
            world: a,
            inner: p("q"),
            scrutinee: Box::new(NdTerm::DiaI { world: b, sub: hyp(0) }),
            table: BTreeMap::from([(b, k.clone())]),
        };
        assert!(check_nd(Logic::Cpl, &f, &ctx, &t, &p("r"), a));
        assert_eq!(reduce_redex(&ctx, &t).unwrap(), k);
    }

    #[test]
    fn substitution_examples() {
        let f = Frame::new(&["w"], &[]).unwrap();
        let w = f.world("w").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("q"), w)]);
        let d = NdTerm::Hyp(0);
        // E uses the substituted hypothesis (index 1) directly.
        assert_eq!(subst_nd(Logic::Cpl, &f, &ctx, &d, w, &NdTerm::Hyp(1), w).unwrap(), d);
        let e = NdTerm::ImpE { arg_ty: p("q"), fun: Box::new(NdTerm::ImpI(hyp(2))), arg: hyp(1) };
        let g = subst_nd(Logic::Cpl, &f, &ctx, &d, w, &e, w).unwrap();
        assert!(check_nd(Logic::Cpl, &f, &ctx, &g, &p("q"), w));
    }

    #[test]
    fn substitution_side_condition() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let ctx = Context::new();
        let r = subst_nd(Logic::Cpl, &f, &ctx, &NdTerm::Hyp(0), b, &NdTerm::Hyp(0), a);
        assert!(matches!(r, Err(NdError::SideCondition(_))));
        assert!(subst_nd(Logic::CplStar, &f, &ctx, &NdTerm::Hyp(0), b, &NdTerm::Hyp(0), a).is_ok());
        assert!(subst_nd(Logic::CplStar, &f, &ctx, &NdTerm::Hyp(0), a, &NdTerm::Hyp(0), b).is_err());
    }

    #[test]
    fn weakening_shifts_indices() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let old = Context::from_iter([Judgment::new(p("q"), a)]);
        let new = old.with(Judgment::new(p("a"), a));
        let t = NdTerm::ImpI(Box::new(NdTerm::Hyp(0)));
        let t2 = weaken_nd(&f, &t, &old, &new, a).unwrap();
        assert_eq!(t2, NdTerm::ImpI(Box::new(NdTerm::Hyp(1))));
        assert!(check_nd(Logic::Cpl, &f, &new, &t2, &p("r -> q"), a));
        assert_eq!(weaken_nd(&f, &t, &old, &old, a).unwrap(), t);
        let b = f.world("beta").unwrap();
        let bad = old.with(Judgment::new(p("a"), b));
        assert!(matches!(weaken_nd(&f, &t, &old, &bad, a), Err(NdError::Order(_))));
    }

    #[test]
    fn expansion_at_each_connective() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let g = f.world("gamma").unwrap();
        let ctx = Context::from_iter([
            Judgment::new(p("x -> y"), a),
            Judgment::new(p("dia q"), a),
            Judgment::new(p("box q"), a),
            Judgment::new(p("q"), b),
            Judgment::new(p("q"), g),
        ]);
        for (i, goal) in ["box q", "dia q", "x -> y", "q"].iter().enumerate() {
            let goal = p(goal);
            let term = NdTerm::Hyp(ctx.position(&Judgment::new(goal.clone(), a)).unwrap_or(i));
            if goal == p("q") {
                assert!(matches!(expand_neutral(Logic::Cpl, &f, &ctx, &term, &goal, a), Err(NdError::UnsupportedShape(_))));
                continue;
            }
            assert!(check_nd(Logic::Cpl, &f, &ctx, &term, &goal, a));
            let e = expand_neutral(Logic::Cpl, &f, &ctx, &term, &goal, a).unwrap();
            assert!(check_nd(Logic::Cpl, &f, &ctx, &e, &goal, a), "{goal}: {e:?}");
        }
    }

    #[test]
    fn extraction_of_the_running_example() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let ctx = Context::from_iter([Judgment::new(p("dia q"), a)]);
        let proof = decide_cpl(&f, &ctx, &Prop::Bot, a).into_proof().unwrap();
        let t = extract_nd(&f, &ctx, &Prop::Bot, a, &proof).unwrap();
        assert_eq!(
            t,
            NdTerm::DiaE { world: a, inner: p("q"), scrutinee: hyp(0), table: BTreeMap::new() }
        );
        assert!(check_nd(Logic::Cpl, &f, &ctx, &t, &Prop::Bot, a));
    }
}
