//! Proof search for the focused calculus.
//!
//! Inversion is deterministic. Choices happen only at neutral sequents
//! (`Ω` empty, stable goal): `↑R` first, then `↓L` on each `↓A−[w']` with
//! `w ≺* w'` in canonical context order. Neutral sequents carry the loop
//! check; sub-queries at other worlds run on a fresh stack and are memoized.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{FocProof, FocSequent};
use crate::syntax::{Frame, Neg, PolContext, PolJudgment, Pos, World};
use crate::{BudgetExhausted, ProofResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PNode {
    Atom,
    Down(usize),
    Bot,
    /// Body and the id of `↑body`, the goal of its witness queries.
    Dia(usize, usize),
    Box(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum NNode {
    Atom,
    Up(usize),
    Imp(usize, usize),
}

struct PolClosure {
    pos: Vec<Pos>,
    pnodes: Vec<PNode>,
    nnodes: Vec<NNode>,
    pidx: HashMap<Pos, usize>,
    nidx: HashMap<Neg, usize>,
    worlds: usize,
    upsets: Vec<FixedBitSet>,
}

fn collect_pos(p: &Pos, ps: &mut BTreeSet<Pos>, ns: &mut BTreeSet<Neg>) {
    if !ps.insert(p.clone()) {
        return;
    }
    match p {
        Pos::Atom(_) | Pos::Bot => {}
        Pos::Down(n) => collect_neg(n, ps, ns),
        Pos::Dia(a) | Pos::Box(a) => {
            collect_neg(&Neg::Up(a.clone()), ps, ns);
        }
    }
}

fn collect_neg(n: &Neg, ps: &mut BTreeSet<Pos>, ns: &mut BTreeSet<Neg>) {
    if !ns.insert(n.clone()) {
        return;
    }
    match n {
        Neg::Atom(_) => {}
        Neg::Up(a) => collect_pos(a, ps, ns),
        Neg::Imp(a, b) => {
            collect_pos(a, ps, ns);
            collect_neg(b, ps, ns);
        }
    }
}

impl PolClosure {
    fn new(frame: &Frame, seq: &FocSequent) -> Self {
        let mut ps = BTreeSet::new();
        let mut ns = BTreeSet::new();
        for j in seq.ctx() {
            collect_pos(&j.prop, &mut ps, &mut ns);
        }
        match seq {
            FocSequent::RFoc { focus, .. } => collect_pos(focus, &mut ps, &mut ns),
            FocSequent::Inv { omega, goal, .. } => {
                if let Some(j) = omega {
                    collect_pos(&j.prop, &mut ps, &mut ns);
                }
                collect_neg(goal, &mut ps, &mut ns);
            }
            FocSequent::LFoc { focus, goal, .. } => {
                collect_neg(focus, &mut ps, &mut ns);
                collect_neg(goal, &mut ps, &mut ns);
            }
        }
        let pos: Vec<Pos> = ps.into_iter().collect();
        let neg: Vec<Neg> = ns.into_iter().collect();
        let pidx: HashMap<Pos, usize> = pos.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let nidx: HashMap<Neg, usize> = neg.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let pnodes = pos
            .iter()
            .map(|p| match p {
                Pos::Atom(_) => PNode::Atom,
                Pos::Bot => PNode::Bot,
                Pos::Down(n) => PNode::Down(nidx[&**n]),
                Pos::Dia(a) => PNode::Dia(pidx[&**a], nidx[&Neg::Up(a.clone())]),
                Pos::Box(a) => PNode::Box(pidx[&**a], nidx[&Neg::Up(a.clone())]),
            })
            .collect();
        let nnodes = neg
            .iter()
            .map(|n| match n {
                Neg::Atom(_) => NNode::Atom,
                Neg::Up(a) => NNode::Up(pidx[&**a]),
                Neg::Imp(a, b) => NNode::Imp(pidx[&**a], nidx[&**b]),
            })
            .collect();
        let nw = frame.len();
        let nbits = pos.len() * nw;
        let upsets = frame
            .worlds()
            .map(|w| {
                let mut m = FixedBitSet::with_capacity(nbits);
                for v in frame.star_row(w).ones() {
                    for f in 0..pos.len() {
                        m.insert(f * nw + v);
                    }
                }
                m
            })
            .collect();
        PolClosure { pos, pnodes, nnodes, pidx, nidx, worlds: nw, upsets }
    }

    fn bit(&self, f: usize, w: World) -> usize {
        f * self.worlds + w.index()
    }

    fn nbits(&self) -> usize {
        self.pos.len() * self.worlds
    }

    fn stable(&self, f: usize) -> bool {
        matches!(self.pnodes[f], PNode::Atom | PNode::Down(_))
    }
}

/// Search configuration for the focused calculus.
#[derive(Clone, Copy, Debug)]
pub struct FocProver {
    budget: u64,
    commit: bool,
}

impl Default for FocProver {
    fn default() -> Self {
        FocProver { budget: u64::MAX, commit: true }
    }
}

impl FocProver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Maximum number of sequents visited before giving up.
    pub fn budget(mut self, steps: u64) -> Self {
        self.budget = steps;
        self
    }

    /// When on, a successful left-focus chain that ends by adding a fresh
    /// stable fact to `Γ` is not backtracked over: the enlarged neutral
    /// sequent is provable iff the original is. Off gives full backtracking.
    pub fn commit_on_growth(mut self, on: bool) -> Self {
        self.commit = on;
        self
    }

    pub fn decide(&self, frame: &Frame, seq: &FocSequent) -> Result<ProofResult<FocProof>, BudgetExhausted> {
        if let Err(e) = seq.validate(frame) {
            panic!("malformed focused sequent: {e}");
        }
        let cl = PolClosure::new(frame, seq);
        let mut ctx = FixedBitSet::with_capacity(cl.nbits());
        for j in seq.ctx() {
            ctx.insert(cl.bit(cl.pidx[&j.prop], j.world));
        }
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
        let r = match seq {
            FocSequent::RFoc { focus, world, .. } => {
                let a = eng.cl.pidx[focus];
                eng.rfoc(&ctx, a, *world, *world)?
            }
            FocSequent::Inv { omega, goal, world, .. } => {
                let om = omega.as_ref().map(|j| (eng.cl.pidx[&j.prop], j.world));
                let g = eng.cl.nidx[goal];
                eng.inv(&ctx, om, g, *world)?
            }
            FocSequent::LFoc { focus, focus_world, goal, world, .. } => {
                let f = eng.cl.nidx[focus];
                let g = eng.cl.nidx[goal];
                match eng.lfoc(&ctx, f, *focus_world, g, *world)? {
                    Left::Proved(p) => Some(p),
                    Left::Failed | Left::Committed => None,
                }
            }
        };
        Ok(match r {
            Some(p) => ProofResult::Provable(Arc::unwrap_or_clone(p)),
            None => ProofResult::Refuted,
        })
    }
}

/// Restricts a polarized context to the judgments `≺*`-above `w`.
pub(crate) fn restrict_pol(frame: &Frame, ctx: &PolContext, w: World) -> PolContext {
    let mut out = PolContext::new();
    for j in ctx {
        if frame.reaches(w, j.world, crate::syntax::Reach::Star) {
            out.insert(j.clone()).expect("already stable");
        }
    }
    out
}

type Key = (FixedBitSet, usize, usize);
type Found = Result<Option<Arc<FocProof>>, BudgetExhausted>;

enum Left {
    Proved(Arc<FocProof>),
    Failed,
    /// The chain succeeded into a fresh fact whose continuation failed; the
    /// enclosing neutral sequent is refuted outright.
    Committed,
}

struct Engine<'a> {
    frame: &'a Frame,
    cl: PolClosure,
    absolute: HashMap<Key, Option<Arc<FocProof>>>,
    proved: HashMap<Key, Arc<FocProof>>,
    stack: HashSet<(FixedBitSet, usize)>,
    steps: u64,
    budget: u64,
    commit: bool,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), BudgetExhausted> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(BudgetExhausted(self.budget))
        } else {
            Ok(())
        }
    }

    /// `Γ; · ⊢ C−[w]` at a world other than the caller's.
    fn absolute(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        let mut c = ctx.clone();
        c.intersect_with(&self.cl.upsets[w.index()]);
        let key = (c, goal, w.index());
        if let Some(r) = self.absolute.get(&key) {
            return Ok(r.clone());
        }
        let saved = std::mem::take(&mut self.stack);
        let r = self.inv(&key.0, None, goal, w);
        self.stack = saved;
        let r = r?;
        self.absolute.insert(key, r.clone());
        Ok(r)
    }

    fn rfoc(&mut self, ctx: &FixedBitSet, a: usize, w: World, home: World) -> Found {
        self.tick()?;
        let frame = self.frame;
        Ok(match self.cl.pnodes[a] {
            PNode::Atom => ctx.contains(self.cl.bit(a, w)).then(|| Arc::new(FocProof::QR)),
            PNode::Down(n) => {
                let sub = if w == home {
                    self.inv(ctx, None, n, w)?
                } else {
                    self.absolute(ctx, n, w)?
                };
                sub.map(|p| Arc::new(FocProof::DownR(p)))
            }
            PNode::Bot => None,
            PNode::Dia(_, up) => {
                let mut found = None;
                for &v in frame.successors(w) {
                    if let Some(p) = self.absolute(ctx, up, v)? {
                        found = Some(Arc::new(FocProof::DiaR { successor: v, sub: p }));
                        break;
                    }
                }
                found
            }
            PNode::Box(_, up) => {
                let mut subs = BTreeMap::new();
                for &v in frame.successors(w) {
                    match self.absolute(ctx, up, v)? {
                        Some(p) => {
                            subs.insert(v, p);
                        }
                        None => return Ok(None),
                    }
                }
                Some(Arc::new(FocProof::BoxR { subs }))
            }
        })
    }

    fn inv(&mut self, ctx: &FixedBitSet, omega: Option<(usize, World)>, goal: usize, w: World) -> Found {
        if let Some((a, aw)) = omega {
            return self.inv_omega(ctx, a, aw, goal, w);
        }
        match self.cl.nnodes[goal] {
            NNode::Imp(a, b) => {
                self.tick()?;
                Ok(self.inv(ctx, Some((a, w)), b, w)?.map(|p| Arc::new(FocProof::ImpR(p))))
            }
            NNode::Atom | NNode::Up(_) => self.neutral(ctx, goal, w),
        }
    }

    fn inv_omega(&mut self, ctx: &FixedBitSet, a: usize, aw: World, goal: usize, w: World) -> Found {
        self.tick()?;
        let frame = self.frame;
        let wrap = |r: Option<Arc<FocProof>>, f: &dyn Fn(Arc<FocProof>) -> FocProof| r.map(|p| Arc::new(f(p)));
        match self.cl.pnodes[a] {
            PNode::Atom | PNode::Down(_) => {
                let mut c2 = ctx.clone();
                c2.insert(self.cl.bit(a, aw));
                let r = self.inv(&c2, None, goal, w)?;
                Ok(wrap(r, &FocProof::L))
            }
            PNode::Bot => Ok(Some(Arc::new(FocProof::BotL))),
            PNode::Dia(_, up) => {
                let mut ws = Vec::new();
                for &v in frame.successors(aw) {
                    if self.absolute(ctx, up, v)?.is_some() {
                        ws.push(v);
                    }
                }
                if ws.is_empty() {
                    return Ok(Some(Arc::new(FocProof::DiaL { witnesses: BTreeMap::new() })));
                }
                let Some(cont) = self.inv(ctx, None, goal, w)? else { return Ok(None) };
                let witnesses = ws.into_iter().map(|v| (v, cont.clone())).collect();
                Ok(Some(Arc::new(FocProof::DiaL { witnesses })))
            }
            PNode::Box(_, up) => {
                for &v in frame.successors(aw) {
                    if self.absolute(ctx, up, v)?.is_none() {
                        return Ok(Some(Arc::new(FocProof::BoxL { continuation: None })));
                    }
                }
                let r = self.inv(ctx, None, goal, w)?;
                Ok(r.map(|p| Arc::new(FocProof::BoxL { continuation: Some(p) })))
            }
        }
    }

    fn neutral(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        self.tick()?;
        let key = (ctx.clone(), goal, w.index());
        if let Some(p) = self.proved.get(&key) {
            return Ok(Some(p.clone()));
        }
        let frame_key = (ctx.clone(), goal);
        if !self.stack.insert(frame_key.clone()) {
            return Ok(None);
        }
        let r = self.neutral_rules(ctx, goal, w);
        self.stack.remove(&frame_key);
        let r = r?;
        if let Some(p) = &r {
            self.proved.insert(key, p.clone());
        }
        Ok(r)
    }

    fn neutral_rules(&mut self, ctx: &FixedBitSet, goal: usize, w: World) -> Found {
        if let NNode::Up(a) = self.cl.nnodes[goal] {
            if let Some(p) = self.rfoc(ctx, a, w, w)? {
                return Ok(Some(Arc::new(FocProof::UpR(p))));
            }
        }
        let frame = self.frame;
        for f in 0..self.cl.pos.len() {
            let PNode::Down(n) = self.cl.pnodes[f] else { continue };
            for v in frame.star_row(w).ones() {
                let v = World::from_index(v);
                if !ctx.contains(self.cl.bit(f, v)) {
                    continue;
                }
                match self.lfoc(ctx, n, v, goal, w)? {
                    Left::Proved(sub) => {
                        let principal = PolJudgment::new(self.cl.pos[f].clone(), v);
                        return Ok(Some(Arc::new(FocProof::DownL { principal, sub })));
                    }
                    Left::Committed => return Ok(None),
                    Left::Failed => {}
                }
            }
        }
        Ok(None)
    }

    fn lfoc(&mut self, ctx: &FixedBitSet, f: usize, fw: World, goal: usize, w: World) -> Result<Left, BudgetExhausted> {
        self.tick()?;
        match self.cl.nnodes[f] {
            NNode::Atom => Ok(if f == goal && fw == w {
                Left::Proved(Arc::new(FocProof::QL))
            } else {
                Left::Failed
            }),
            NNode::Up(a) => {
                let fresh = self.cl.stable(a) && !ctx.contains(self.cl.bit(a, fw));
                match self.inv(ctx, Some((a, fw)), goal, w)? {
                    Some(p) => Ok(Left::Proved(Arc::new(FocProof::UpL(p)))),
                    None if self.commit && fresh => Ok(Left::Committed),
                    None => Ok(Left::Failed),
                }
            }
            NNode::Imp(a, b) => {
                let Some(arg) = self.rfoc(ctx, a, fw, w)? else { return Ok(Left::Failed) };
                Ok(match self.lfoc(ctx, b, fw, goal, w)? {
                    Left::Proved(cont) => Left::Proved(Arc::new(FocProof::ImpL { arg, cont })),
                    other => other,
                })
            }
        }
    }
}
