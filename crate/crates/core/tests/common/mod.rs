#![allow(dead_code)]

use cplkit::syntax::{Context, Frame, Judgment, Prop, Reach, World};
use proptest::prelude::*;

pub fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Acyclic frames: forward edges over a shuffled total order.
pub fn frame_strategy(max_worlds: usize) -> impl Strategy<Value = Frame> {
    (1..=max_worlds)
        .prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2),
            )
        })
        .prop_map(|(order, bits)| {
            let n = order.len();
            let names = world_names(n);
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((names[order[i]].clone(), names[order[j]].clone()));
                    }
                    k += 1;
                }
            }
            Frame::new(&names, &edges).unwrap()
        })
}

pub fn prop_strategy(depth: u32) -> BoxedStrategy<Prop> {
    let leaf = prop_oneof![Just(Prop::atom("p")), Just(Prop::atom("q")), Just(Prop::Bot)];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::imp(a, b)),
            1 => inner.clone().prop_map(Prop::dia),
            1 => inner.prop_map(Prop::boxed),
        ]
    })
    .boxed()
}

pub fn nth_world(f: &Frame, i: usize) -> World {
    f.worlds().nth(i % f.len()).unwrap()
}

/// A sequent `Γ ⇒ A[w]` with a second formula `c` for cut-style properties.
#[derive(Clone, Debug)]
pub struct Point {
    pub frame: Frame,
    pub ctx: Context,
    pub a: Prop,
    pub c: Prop,
    pub w: World,
}

pub fn point_strategy(max_worlds: usize, ctx_len: usize, depth: u32) -> impl Strategy<Value = Point> {
    frame_strategy(max_worlds).prop_flat_map(move |f| {
        (
            Just(f),
            proptest::collection::vec((prop_strategy(depth.saturating_sub(1)), any::<usize>()), 0..=ctx_len),
            prop_strategy(depth),
            prop_strategy(depth),
            any::<usize>(),
        )
            .prop_map(|(frame, hyps, a, c, wi)| {
                let ctx = hyps.into_iter().map(|(p, i)| Judgment::new(p, nth_world(&frame, i))).collect();
                let w = nth_world(&frame, wi);
                Point { frame, ctx, a, c, w }
            })
    })
}

/// Builds `Γ′` with `Γ ⊆_w Γ′`: judgments strictly above `w` are kept,
/// judgments at `w` are kept, everything else may be dropped, and additions
/// go to `w` or to worlds outside its `≺*`-range.
pub fn grow(frame: &Frame, ctx: &Context, w: World, drop: &[bool], extra: &[(Prop, usize)]) -> Context {
    let mut out = Context::new();
    for (i, j) in ctx.iter().enumerate() {
        let pinned = frame.reaches(w, j.world, Reach::Star);
        if pinned || !drop.get(i).copied().unwrap_or(false) {
            out.insert(j.clone());
        }
    }
    for (p, i) in extra {
        let u = nth_world(frame, *i);
        if u == w || !frame.reaches(w, u, Reach::Star) {
            out.insert(Judgment::new(p.clone(), u));
        }
    }
    out
}
