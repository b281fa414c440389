//! Executable axiom checks: Hilbert-level validity is approximated by
//! universal provability over a seeded battery of frames, worlds and sampled
//! contexts. Only soundness is tested; a `Valid` verdict is evidence, not proof.

mod enumerate;
mod ipc;
mod schemas;

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::syntax::{parse_prop, Context, Frame, Judgment, Prop, World};
use crate::Logic;

pub use enumerate::enumerate_formulas;
pub use ipc::{ipc_decide, FragmentError};
pub use schemas::{
    demorgan_check, known_countermodels, lob_check, mp_check, nec_check, run_suite, schemas,
    check_schema, Countermodel, Expected, FrameCondition, Schema, Suite, SuiteConfig,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameBattery {
    pub seed: u64,
    pub frames: Vec<Frame>,
}

impl FrameBattery {
    /// The same frames under transitive closure; world names are kept.
    pub fn transitive(&self) -> FrameBattery {
        FrameBattery { seed: self.seed, frames: self.frames.iter().map(Frame::transitive_closure).collect() }
    }
}

/// Random DAGs: a random topological order, then each forward pair is an
/// edge with probability ½.
pub fn gen_frames(seed: u64, count: usize, max_worlds: usize, transitive: bool) -> FrameBattery {
    assert!(max_worlds >= 1, "a frame needs at least one world");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames = (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_worlds);
            let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((names[order[i]].clone(), names[order[j]].clone()));
                    }
                }
            }
            let f = Frame::new(&names, &edges).expect("forward edges in a total order are acyclic");
            if transitive {
                f.transitive_closure()
            } else {
                f
            }
        })
        .collect();
    FrameBattery { seed, frames }
}

/// Sample formulas for metavariables and contexts.
#[derive(Clone, Debug)]
pub struct Samples {
    pub formulas: Vec<Prop>,
    /// Random contexts per frame, in addition to the empty one.
    pub contexts: usize,
    pub max_judgments: usize,
    pub seed: u64,
}

impl Samples {
    pub fn standard(seed: u64) -> Samples {
        let formulas = [
            "p", "q", "bot", "~p", "p -> q", "q -> q", "dia q", "box p", "box q -> q", "dia bot",
        ]
        .iter()
        .map(|s| parse_prop(s).expect("sample formulas parse"))
        .collect();
        Samples { formulas, contexts: 3, max_judgments: 4, seed }
    }

    /// Contexts for the `idx`-th frame of a battery. The world set is all
    /// that matters, so a frame and its transitive closure share contexts.
    pub fn contexts_for(&self, frame: &Frame, idx: usize) -> Vec<Context> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let worlds: Vec<World> = frame.worlds().collect();
        let mut out = vec![Context::new()];
        for _ in 0..self.contexts {
            let k = rng.gen_range(1..=self.max_judgments);
            let ctx: Context = (0..k)
                .map(|_| {
                    let a = self.formulas.choose(&mut rng).unwrap().clone();
                    Judgment::new(a, *worlds.choose(&mut rng).unwrap())
                })
                .collect();
            out.push(ctx);
        }
        out
    }
}

/// A random formula over `p`, `q` and `⊥` of depth at most `depth`.
pub fn random_prop<R: Rng>(rng: &mut R, depth: usize) -> Prop {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 | 1 => Prop::atom("p"),
            2 | 3 => Prop::atom("q"),
            _ => Prop::Bot,
        };
    }
    match rng.gen_range(0..4) {
        0 | 1 => Prop::imp(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
        2 => Prop::dia(random_prop(rng, depth - 1)),
        _ => Prop::boxed(random_prop(rng, depth - 1)),
    }
}

/// Up to `max_len` random judgments at random worlds of `frame`.
pub fn random_context<R: Rng>(rng: &mut R, frame: &Frame, max_len: usize, depth: usize) -> Context {
    let worlds: Vec<World> = frame.worlds().collect();
    let k = rng.gen_range(0..=max_len);
    (0..k).map(|_| Judgment::new(random_prop(rng, depth), *worlds.choose(rng).unwrap())).collect()
}

/// A point of the battery where a formula is not provable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub frame: Frame,
    pub ctx: Context,
    pub world: World,
    pub prop: Prop,
}

impl Counterexample {
    /// True iff the decider still refutes the instance.
    pub fn replays_refuted(&self, logic: Logic) -> bool {
        !logic.provable(&self.frame, &self.ctx, &self.prop, self.world)
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> =
            self.frame.edges().map(|(a, b)| format!("{}<{}", self.frame.name(a), self.frame.name(b))).collect();
        write!(
            f,
            "frame {{{}}} edges [{}]: {} => {} @ {}",
            self.frame.worlds().map(|w| self.frame.name(w).to_string()).collect::<Vec<_>>().join(","),
            edges.join(" "),
            self.ctx.display(&self.frame),
            self.prop,
            self.frame.name(self.world)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub logic: Logic,
    pub frames: usize,
    pub instances: usize,
    /// Decider calls made.
    pub checks: usize,
    pub verdict: Verdict,
    pub expected: Expected,
    pub counterexample: Option<Counterexample>,
}

impl Report {
    /// Only a counterexample to an expected-valid row deviates. A battery
    /// without a countermodel for an invalid schema is inconclusive, and
    /// `Unknown` rows are only reported.
    pub fn deviates(&self) -> bool {
        self.expected == Expected::Valid && self.verdict != Verdict::Valid
    }

    /// An expected-invalid row whose battery held no countermodel.
    pub fn inconclusive(&self) -> bool {
        self.expected == Expected::Invalid && self.verdict == Verdict::Valid
    }
}

/// All `(frame index, context, world)` points of a battery, in canonical order.
pub(crate) fn points(battery: &FrameBattery, samples: &Samples) -> Vec<(usize, Context, World)> {
    let mut out = Vec::new();
    for (i, f) in battery.frames.iter().enumerate() {
        for ctx in samples.contexts_for(f, i) {
            for w in f.worlds() {
                out.push((i, ctx.clone(), w));
            }
        }
    }
    out
}

/// First failing `(point, formula)` over the battery in canonical order,
/// plus the number of decider calls. Frames are checked in parallel.
pub(crate) fn first_failure(
    logic: Logic,
    battery: &FrameBattery,
    samples: &Samples,
    formulas: &[Prop],
) -> (Option<Counterexample>, usize) {
    let per_frame: Vec<(Option<Counterexample>, usize)> = battery
        .frames
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut calls = 0;
            for ctx in samples.contexts_for(f, i) {
                for w in f.worlds() {
                    for a in formulas {
                        calls += 1;
                        if !logic.provable(f, &ctx, a, w) {
                            let cx = Counterexample { frame: f.clone(), ctx, world: w, prop: a.clone() };
                            return (Some(cx), calls);
                        }
                    }
                }
            }
            (None, calls)
        })
        .collect();
    let calls = per_frame.iter().map(|x| x.1).sum();
    (per_frame.into_iter().find_map(|x| x.0), calls)
}

/// Whether `a` is provable at every point of the battery.
pub(crate) fn universal(logic: Logic, battery: &FrameBattery, samples: &Samples, a: &Prop) -> bool {
    first_failure(logic, battery, samples, std::slice::from_ref(a)).0.is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Reach;

    #[test]
    fn batteries_are_deterministic() {
        assert_eq!(gen_frames(7, 10, 4, false), gen_frames(7, 10, 4, false));
        assert_ne!(gen_frames(7, 10, 4, false), gen_frames(8, 10, 4, false));
        let t = gen_frames(7, 10, 4, true);
        for f in &t.frames {
            assert!(f.len() <= 4);
            for a in f.worlds() {
                for b in f.worlds() {
                    let edge = f.successors(a).contains(&b);
                    assert_eq!(edge, f.reaches(a, b, Reach::Plus));
                }
            }
        }
        assert_eq!(gen_frames(7, 10, 4, false).transitive(), t);
    }

    #[test]
    fn contexts_are_shared_by_closure() {
        let s = Samples::standard(1);
        let b = gen_frames(3, 5, 5, false);
        let t = b.transitive();
        for i in 0..5 {
            assert_eq!(s.contexts_for(&b.frames[i], i), s.contexts_for(&t.frames[i], i));
        }
    }
}
