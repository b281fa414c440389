//! Decision procedure for the tethered sequent calculus.
//!
//! Backward, goal-directed search: `init`/`⊥L`, then right rules, then left
//! rules over the context in canonical order. Inside one world a branch
//! fails when it revisits a sequent already on its own stack. A premise at
//! another world can never lead back down (the frame is acyclic), so such
//! premises are decided by a fresh, fully memoized sub-search.
//!
//! The higher-order left rules use the witness-set reading: `◇L` closes the
//! goal when no successor proves the body, `□L` when some successor refutes
//! it. Otherwise their continuation is the conclusion itself and adds nothing.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::closure::{Closure, Node};
use crate::syntax::{Context, Frame, Judgment, Prop, World};
use crate::{BudgetExhausted, ProofResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CplProof {
    Init,
    BotL,
    ImpR(Arc<CplProof>),
    /// `principal` is `A ⊃ B` at the goal world; `arg` proves `A`, `cont`
    /// proves the goal with `B` added.
    ImpL {
        principal: Judgment,
        arg: Arc<CplProof>,
        cont: Arc<CplProof>,
    },
    DiaR {
        successor: World,
        sub: Arc<CplProof>,
    },
    BoxR {
        subs: BTreeMap<World, Arc<CplProof>>,
    },
    /// One continuation per successor where the body is provable.
    DiaL {
        principal: Judgment,
        witnesses: BTreeMap<World, Arc<CplProof>>,
    },
    /// A continuation exactly when the body is provable at every successor.
    BoxL {
        principal: Judgment,
        continuation: Option<Arc<CplProof>>,
    },
}

impl CplProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            CplProof::Init => "init",
            CplProof::BotL => "⊥L",
            CplProof::ImpR(_) => "⊃R",
            CplProof::ImpL { .. } => "⊃L",
            CplProof::DiaR { .. } => "◇R",
            CplProof::BoxR { .. } => "□R",
            CplProof::DiaL { .. } => "◇L",
            CplProof::BoxL { .. } => "□L",
        }
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + match self {
            CplProof::Init | CplProof::BotL => 0,
            CplProof::ImpR(p) => p.size(),
            CplProof::ImpL { arg, cont, .. } => arg.size() + cont.size(),
            CplProof::DiaR { sub, .. } => sub.size(),
            CplProof::BoxR { subs } => subs.values().map(|p| p.size()).sum(),
            CplProof::DiaL { witnesses, .. } => witnesses.values().map(|p| p.size()).sum(),
            CplProof::BoxL { continuation, .. } => continuation.as_ref().map_or(0, |p| p.size()),
        }
    }
}

/// Search configuration.
#[derive(Clone, Copy, Debug)]
pub struct CplProver {
    budget: u64,
    commit: bool,
}

impl Default for CplProver {
    fn default() -> Self {
        CplProver { budget: u64::MAX, commit: true }
    }
}

impl CplProver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Maximum number of sequents visited before giving up.
    pub fn budget(mut self, steps: u64) -> Self {
        self.budget = steps;
        self
    }

    /// When on, `⊃R` and `⊃L` whose premise strictly grows the context are
    /// not backtracked over: the grown sequent is provable iff the original
    /// is. Off gives plain backtracking over every rule.
    pub fn commit_on_growth(mut self, on: bool) -> Self {
        self.commit = on;
        self
    }

    pub fn decide(
        &self,
        frame: &Frame,
        ctx: &Context,
        goal: &Prop,
        w: World,
    ) -> Result<ProofResult<CplProof>, BudgetExhausted> {
        let roots = ctx.iter().map(|j| &j.prop).chain(std::iter::once(goal));
        let cl = Closure::new(frame, roots);
        let mut bits = FixedBitSet::with_capacity(cl.nbits());
        for j in ctx {
            bits.insert(cl.bit(cl.id(&j.prop), j.world));
        }
        let goal_id = cl.id(goal);
        let mut eng = Engine {
            frame,
            cl,
            absolute: HashMap::new(),
            proved: HashMap::new(),
            stack: HashSet::new(),
            steps: 0,
            budget: self.budget,
            commit: self.commit,
        };
        let r = eng.search(&bits, goal_id, w)?;
        Ok(match r {
            Some(p) => ProofResult::Provable(Arc::unwrap_or_clone(p)),
            None => ProofResult::Refuted,
        })
    }
}

/// Decides `Γ ⇒ C[w]` with the default configuration.
pub fn decide_cpl(frame: &Frame, ctx: &Context, goal: &Prop, w: World) -> ProofResult<CplProof> {
    CplProver::new()
        .decide(frame, ctx, goal, w)
        .expect("unbounded search always terminates")
}

pub fn provable_cpl(frame: &Frame, ctx: &Context, goal: &Prop, w: World) -> bool {
    decide_cpl(frame, ctx, goal, w).is_provable()
}

type Key = (FixedBitSet, usize, usize);

struct Engine<'a> {
    frame: &'a Frame,
    cl: Closure,
    absolute: HashMap<Key, Option<Arc<CplProof>>>,
    proved: HashMap<Key, Arc<CplProof>>,
    stack: HashSet<(FixedBitSet, usize)>,
    steps: u64,
    budget: u64,
    commit: bool,
}

type Found = Result<Option<Arc<CplProof>>, BudgetExhausted>;

impl Engine<'_> {
    fn judgment(&self, f: usize, w: World) -> Judgment {
        Judgment::new(self.cl.props[f].clone(), w)
    }

    /// A premise at a different world: fresh stack, memoized both ways.
    fn absolute(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        let mut c = ctx.clone();
        c.intersect_with(&self.cl.upsets[w.index()]);
        let key = (c, goal, w.index());
        if let Some(r) = self.absolute.get(&key) {
            return Ok(r.clone());
        }
        let saved = std::mem::take(&mut self.stack);
        let r = self.search(&key.0, goal, w);
        self.stack = saved;
        let r = r?;
        self.absolute.insert(key, r.clone());
        Ok(r)
    }

    fn search(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(BudgetExhausted(self.budget));
        }
        let key = (ctx.clone(), goal, w.index());
        if let Some(p) = self.proved.get(&key) {
            return Ok(Some(p.clone()));
        }
        if self.cl.nodes[goal] == Node::Atom && ctx.contains(self.cl.bit(goal, w)) {
            return Ok(Some(Arc::new(CplProof::Init)));
        }
        if let Some(b) = self.cl.bot {
            if ctx.contains(self.cl.bit(b, w)) {
                return Ok(Some(Arc::new(CplProof::BotL)));
            }
        }
        let frame_key = (ctx.clone(), goal);
        if !self.stack.insert(frame_key.clone()) {
            return Ok(None);
        }
        let r = self.rules(ctx, goal, w);
        self.stack.remove(&frame_key);
        let r = r?;
        if let Some(p) = &r {
            self.proved.insert(key, p.clone());
        }
        Ok(r)
    }

    fn rules(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        let frame = self.frame;
        match self.cl.nodes[goal] {
            Node::Imp(a, b) => {
                let bit = self.cl.bit(a, w);
                let grows = !ctx.contains(bit);
                let mut c2 = ctx.clone();
                c2.insert(bit);
                if let Some(p) = self.search(&c2, b, w)? {
                    return Ok(Some(Arc::new(CplProof::ImpR(p))));
                }
                if self.commit && grows {
                    return Ok(None);
                }
            }
            Node::Dia(a) => {
                for &v in frame.successors(w) {
                    if let Some(p) = self.absolute(ctx, a, v)? {
                        return Ok(Some(Arc::new(CplProof::DiaR { successor: v, sub: p })));
                    }
                }
            }
            Node::Box(a) => {
                let mut subs = BTreeMap::new();
                for &v in frame.successors(w) {
                    match self.absolute(ctx, a, v)? {
                        Some(p) => {
                            subs.insert(v, p);
                        }
                        None => break,
                    }
                }
                if subs.len() == frame.successors(w).len() {
                    return Ok(Some(Arc::new(CplProof::BoxR { subs })));
                }
            }
            Node::Atom | Node::Bot => {}
        }

        for f in 0..self.cl.props.len() {
            if !ctx.contains(self.cl.bit(f, w)) {
                continue;
            }
            match self.cl.nodes[f] {
                Node::Imp(a, b) => {
                    let bbit = self.cl.bit(b, w);
                    if ctx.contains(bbit) {
                        // The continuation would be this very sequent.
                        continue;
                    }
                    let Some(arg) = self.search(ctx, a, w)? else { continue };
                    let mut c2 = ctx.clone();
                    c2.insert(bbit);
                    if let Some(cont) = self.search(&c2, goal, w)? {
                        return Ok(Some(Arc::new(CplProof::ImpL {
                            principal: self.judgment(f, w),
                            arg,
                            cont,
                        })));
                    }
                    if self.commit {
                        return Ok(None);
                    }
                }
                Node::Dia(a) => {
                    let mut empty = true;
                    for &v in frame.successors(w) {
                        if self.absolute(ctx, a, v)?.is_some() {
                            empty = false;
                            break;
                        }
                    }
                    if empty {
                        return Ok(Some(Arc::new(CplProof::DiaL {
                            principal: self.judgment(f, w),
                            witnesses: BTreeMap::new(),
                        })));
                    }
                }
                Node::Box(a) => {
                    for &v in frame.successors(w) {
                        if self.absolute(ctx, a, v)?.is_none() {
                            return Ok(Some(Arc::new(CplProof::BoxL {
                                principal: self.judgment(f, w),
                                continuation: None,
                            })));
                        }
                    }
                }
                Node::Atom | Node::Bot => {}
            }
        }
        Ok(None)
    }
}

/// Checks that `proof` is a derivation of `Γ ⇒ C[w]`. Witness sets of `◇L`
/// and `□L` nodes are recomputed with [`decide_cpl`].
pub fn replay_cpl(frame: &Frame, ctx: &Context, goal: &Prop, w: World, proof: &CplProof) -> bool {
    replay_diagnose(frame, ctx, goal, w, proof).is_ok()
}

/// Like [`replay_cpl`], reporting the first rule that fails to apply.
pub fn replay_diagnose(
    frame: &Frame,
    ctx: &Context,
    goal: &Prop,
    w: World,
    proof: &CplProof,
) -> Result<(), String> {
    let fail = |msg: &str| Err(format!("{} at {} @ {}: {msg}", proof.rule_name(), goal, frame.name(w)));
    match proof {
        CplProof::Init => {
            if !matches!(goal, Prop::Atom(_)) {
                return fail("goal is not atomic");
            }
            if !ctx.contains(&Judgment::new(goal.clone(), w)) {
                return fail("goal not in context at this world");
            }
            Ok(())
        }
        CplProof::BotL => {
            if ctx.contains(&Judgment::new(Prop::Bot, w)) {
                Ok(())
            } else {
                fail("no ⊥ at this world")
            }
        }
        CplProof::ImpR(sub) => match goal {
            Prop::Imp(a, b) => {
                let c2 = ctx.with(Judgment::new((**a).clone(), w));
                replay_diagnose(frame, &c2, b, w, sub)
            }
            _ => fail("goal is not an implication"),
        },
        CplProof::ImpL { principal, arg, cont } => {
            if principal.world != w || !ctx.contains(principal) {
                return fail("principal not in context at this world");
            }
            let Prop::Imp(a, b) = &principal.prop else {
                return fail("principal is not an implication");
            };
            replay_diagnose(frame, ctx, a, w, arg)?;
            let c2 = ctx.with(Judgment::new((**b).clone(), w));
            replay_diagnose(frame, &c2, goal, w, cont)
        }
        CplProof::DiaR { successor, sub } => {
            let Prop::Dia(a) = goal else { return fail("goal is not ◇") };
            if !frame.successors(w).contains(successor) {
                return fail("chosen world is not a successor");
            }
            replay_diagnose(frame, ctx, a, *successor, sub)
        }
        CplProof::BoxR { subs } => {
            let Prop::Box(a) = goal else { return fail("goal is not □") };
            if !subs.keys().copied().eq(frame.successors(w).iter().copied()) {
                return fail("table does not cover exactly the successors");
            }
            for (&v, p) in subs {
                replay_diagnose(frame, ctx, a, v, p)?;
            }
            Ok(())
        }
        CplProof::DiaL { principal, witnesses } => {
            if principal.world != w || !ctx.contains(principal) {
                return fail("principal not in context at this world");
            }
            let Prop::Dia(a) = &principal.prop else { return fail("principal is not ◇") };
            let expected: Vec<World> = frame
                .successors(w)
                .iter()
                .copied()
                .filter(|&v| provable_cpl(frame, ctx, a, v))
                .collect();
            if !witnesses.keys().copied().eq(expected.iter().copied()) {
                return fail("witness table differs from the witness set");
            }
            for p in witnesses.values() {
                replay_diagnose(frame, ctx, goal, w, p)?;
            }
            Ok(())
        }
        CplProof::BoxL { principal, continuation } => {
            if principal.world != w || !ctx.contains(principal) {
                return fail("principal not in context at this world");
            }
            let Prop::Box(a) = &principal.prop else { return fail("principal is not □") };
            let all = frame.successors(w).iter().all(|&v| provable_cpl(frame, ctx, a, v));
            match (all, continuation) {
                (false, None) => Ok(()),
                (true, Some(p)) => replay_diagnose(frame, ctx, goal, w, p),
                (true, None) => fail("missing continuation although every successor proves the body"),
                (false, Some(_)) => fail("continuation given although some successor refutes the body"),
            }
        }
    }
}

/// Every judgment mentioned by `proof` (context additions, goals and
/// principals), for checking the sub-formula property.
pub fn proof_judgments(ctx: &Context, goal: &Prop, w: World, proof: &CplProof) -> Vec<Judgment> {
    let mut out = Vec::new();
    walk(ctx, goal, w, proof, &mut out);
    out
}

fn walk(ctx: &Context, goal: &Prop, w: World, proof: &CplProof, out: &mut Vec<Judgment>) {
    out.push(Judgment::new(goal.clone(), w));
    match proof {
        CplProof::Init | CplProof::BotL => {}
        CplProof::ImpR(sub) => {
            if let Prop::Imp(a, b) = goal {
                let j = Judgment::new((**a).clone(), w);
                out.push(j.clone());
                walk(&ctx.with(j), b, w, sub, out);
            }
        }
        CplProof::ImpL { principal, arg, cont } => {
            out.push(principal.clone());
            if let Prop::Imp(a, b) = &principal.prop {
                walk(ctx, a, w, arg, out);
                let j = Judgment::new((**b).clone(), w);
                out.push(j.clone());
                walk(&ctx.with(j), goal, w, cont, out);
            }
        }
        CplProof::DiaR { successor, sub } => {
            if let Prop::Dia(a) = goal {
                walk(ctx, a, *successor, sub, out);
            }
        }
        CplProof::BoxR { subs } => {
            if let Prop::Box(a) = goal {
                for (&v, p) in subs {
                    walk(ctx, a, v, p, out);
                }
            }
        }
        CplProof::DiaL { principal, witnesses } => {
            out.push(principal.clone());
            for p in witnesses.values() {
                walk(ctx, goal, w, p, out);
            }
        }
        CplProof::BoxL { principal, continuation } => {
            out.push(principal.clone());
            if let Some(p) = continuation {
                walk(ctx, goal, w, p, out);
            }
        }
    }
}
