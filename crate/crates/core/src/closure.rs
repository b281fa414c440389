//! Subformula interning for the unpolarized decider.
//!
//! Every proposition reachable from a root sequent gets a dense index, in
//! canonical (`Ord`) order, so contexts become bitsets over
//! `formula × world` and sequents become cheap hashable keys.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::syntax::{Frame, Prop, World};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Atom,
    Bot,
    Imp(usize, usize),
    Dia(usize),
    Box(usize),
}

pub(crate) struct Closure {
    pub props: Vec<Prop>,
    pub nodes: Vec<Node>,
    index: HashMap<Prop, usize>,
    pub bot: Option<usize>,
    pub worlds: usize,
    /// Per world `w`: the judgment bits at worlds `w'` with `w ≺* w'`.
    pub upsets: Vec<FixedBitSet>,
}

impl Closure {
    pub fn new<'a>(frame: &Frame, roots: impl IntoIterator<Item = &'a Prop>) -> Closure {
        let mut all = BTreeSet::new();
        for r in roots {
            r.collect_subformulas(&mut all);
        }
        let props: Vec<Prop> = all.into_iter().collect();
        let index: HashMap<Prop, usize> =
            props.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let nodes = props
            .iter()
            .map(|p| match p {
                Prop::Atom(_) => Node::Atom,
                Prop::Bot => Node::Bot,
                Prop::Imp(a, b) => Node::Imp(index[&**a], index[&**b]),
                Prop::Dia(a) => Node::Dia(index[&**a]),
                Prop::Box(a) => Node::Box(index[&**a]),
            })
            .collect();
        let bot = index.get(&Prop::Bot).copied();
        let nw = frame.len();
        let nbits = props.len() * nw;
        let upsets = frame
            .worlds()
            .map(|w| {
                let mut m = FixedBitSet::with_capacity(nbits);
                for v in frame.star_row(w).ones() {
                    for f in 0..props.len() {
                        m.insert(f * nw + v);
                    }
                }
                m
            })
            .collect();
        Closure { props, nodes, index, bot, worlds: nw, upsets }
    }

    pub fn id(&self, p: &Prop) -> usize {
        self.index[p]
    }

    pub fn bit(&self, f: usize, w: World) -> usize {
        f * self.worlds + w.index()
    }

    pub fn nbits(&self) -> usize {
        self.props.len() * self.worlds
    }
}
