//! Finite frames: worlds plus an acyclic accessibility relation.
//!
//! Worlds are interned to dense indices ordered by name, so iterating
//! `0..frame.len()` visits worlds in canonical order. Reachability tables for
//! both closures are computed once, at construction.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// An interned world. Only meaningful relative to the [`Frame`] that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct World(pub(crate) u32);

impl World {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> World {
        World(i as u32)
    }
}

/// Which closure of the accessibility relation a reachability query uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    /// Reflexive-transitive closure.
    Star,
    /// Transitive closure.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("world `{0}` declared twice")]
    DuplicateWorld(String),
    #[error("edge mentions undeclared world `{0}`")]
    UnknownWorld(String),
    #[error("accessibility relation has a cycle: {}", .0.join(" < "))]
    Cyclic(Vec<String>),
}

#[derive(Clone)]
pub struct Frame {
    names: Vec<Arc<str>>,
    index: HashMap<Arc<str>, World>,
    succ: Vec<Vec<World>>,
    plus: Vec<FixedBitSet>,
    star: Vec<FixedBitSet>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(a, b)| format!("{}<{}", self.name(a), self.name(b)))
            .collect();
        f.debug_struct("Frame")
            .field("worlds", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.succ == other.succ
    }
}

impl Eq for Frame {}

impl Frame {
    /// Validates and builds a frame. Duplicate edges are merged.
    pub fn new<S: AsRef<str>>(worlds: &[S], edges: &[(S, S)]) -> Result<Frame, FrameError> {
        let mut sorted: Vec<&str> = worlds.iter().map(|w| w.as_ref()).collect();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(FrameError::DuplicateWorld(pair[0].to_string()));
            }
        }
        let names: Vec<Arc<str>> = sorted.iter().map(|s| Arc::from(*s)).collect();
        let index: HashMap<Arc<str>, World> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), World::from_index(i)))
            .collect();

        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let lookup = |n: &str| {
                index
                    .get(n)
                    .copied()
                    .ok_or_else(|| FrameError::UnknownWorld(n.to_string()))
            };
            edge_set.insert((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        let mut succ = vec![Vec::new(); names.len()];
        for &(a, b) in &edge_set {
            succ[a.index()].push(b);
        }

        if let Some(cycle) = find_cycle(&succ) {
            return Err(FrameError::Cyclic(
                cycle.iter().map(|w| names[w.index()].to_string()).collect(),
            ));
        }

        let n = names.len();
        let mut plus = vec![FixedBitSet::with_capacity(n); n];
        // Reverse topological order: every successor is finished first.
        for w in topo_order(&succ).into_iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            for &v in &succ[w.index()] {
                row.insert(v.index());
                row.union_with(&plus[v.index()]);
            }
            plus[w.index()] = row;
        }
        let star = plus
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.insert(i);
                r
            })
            .collect();

        Ok(Frame { names, index, succ, plus, star })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// All worlds in canonical (name) order.
    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.names.len()).map(World::from_index)
    }

    pub fn world(&self, name: &str) -> Option<World> {
        self.index.get(name).copied()
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (World, World)> + '_ {
        self.worlds()
            .flat_map(move |w| self.succ[w.index()].iter().map(move |&v| (w, v)))
    }

    /// Worlds directly accessible from `w`, in canonical order.
    pub fn successors(&self, w: World) -> &[World] {
        &self.succ[w.index()]
    }

    pub fn reaches(&self, from: World, to: World, mode: Reach) -> bool {
        let table = match mode {
            Reach::Star => &self.star,
            Reach::Plus => &self.plus,
        };
        table[from.index()].contains(to.index())
    }

    /// The set `{ w' | w ≺* w' }` as a bitset over world indices.
    pub fn star_row(&self, w: World) -> &FixedBitSet {
        &self.star[w.index()]
    }

    pub fn plus_row(&self, w: World) -> &FixedBitSet {
        &self.plus[w.index()]
    }

    /// True when the edge relation already equals its transitive closure.
    pub fn is_transitive(&self) -> bool {
        self.worlds().all(|w| {
            let row = &self.plus[w.index()];
            row.count_ones(..) == self.succ[w.index()].len()
        })
    }

    /// The frame with the same worlds and the transitive closure as edges.
    pub fn transitive_closure(&self) -> Frame {
        let names: Vec<&str> = self.names.iter().map(|n| &**n).collect();
        let edges: Vec<(&str, &str)> = self
            .worlds()
            .flat_map(|w| {
                self.plus[w.index()]
                    .ones()
                    .map(move |v| (self.name(w), self.name(World::from_index(v))))
            })
            .collect();
        Frame::new(&names, &edges).expect("closure of an acyclic relation is acyclic")
    }

    /// Renders the frame in the line-based text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in self.worlds() {
            out.push_str("world ");
            out.push_str(self.name(w));
            out.push('\n');
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("edge {} {}\n", self.name(a), self.name(b)));
        }
        out
    }
}

fn topo_order(succ: &[Vec<World>]) -> Vec<World> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for row in succ {
        for v in row {
            indeg[v.index()] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).rev().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(World::from_index(i));
        for v in &succ[i] {
            indeg[v.index()] -= 1;
            if indeg[v.index()] == 0 {
                ready.push(v.index());
            }
        }
    }
    order
}

/// Returns one directed cycle (first world repeated at the end), if any.
fn find_cycle(succ: &[Vec<World>]) -> Option<Vec<World>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = succ.len();
    let mut mark = vec![Mark::White; n];
    let mut path: Vec<usize> = Vec::new();

    fn visit(
        u: usize,
        succ: &[Vec<World>],
        mark: &mut [Mark],
        path: &mut Vec<usize>,
    ) -> Option<Vec<World>> {
        mark[u] = Mark::Grey;
        path.push(u);
        for v in &succ[u] {
            let v = v.index();
            match mark[v] {
                Mark::Grey => {
                    let start = path.iter().position(|&x| x == v).unwrap();
                    let mut cycle: Vec<World> =
                        path[start..].iter().map(|&i| World::from_index(i)).collect();
                    cycle.push(World::from_index(v));
                    return Some(cycle);
                }
                Mark::White => {
                    if let Some(c) = visit(v, succ, mark, path) {
                        return Some(c);
                    }
                }
                Mark::Black => {}
            }
        }
        path.pop();
        mark[u] = Mark::Black;
        None
    }

    for u in 0..n {
        if mark[u] == Mark::White {
            if let Some(c) = visit(u, succ, &mut mark, &mut path) {
                return Some(c);
            }
        }
    }
    None
}

/// The three-world frame α ≺ β, α ≺ γ, β ≺ γ used throughout the examples.
pub fn running_frame() -> Frame {
    Frame::new(
        &["alpha", "beta", "gamma"],
        &[("alpha", "beta"), ("alpha", "gamma"), ("beta", "gamma")],
    )
    .expect("running frame is acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_successors() {
        let f = running_frame();
        let a = f.world("alpha").unwrap();
        let b = f.world("beta").unwrap();
        let c = f.world("gamma").unwrap();
        assert_eq!(f.successors(a), &[b, c]);
        assert_eq!(f.successors(c), &[] as &[World]);
        assert!(f.reaches(a, c, Reach::Plus));
        assert!(f.reaches(c, c, Reach::Star));
        assert!(!f.reaches(c, c, Reach::Plus));
        assert!(f.is_transitive());
    }

    #[test]
    fn single_world_has_no_successors() {
        let f = Frame::new(&["w"], &[]).unwrap();
        let w = f.world("w").unwrap();
        assert!(f.successors(w).is_empty());
        assert!(f.reaches(w, w, Reach::Star));
        assert!(!f.reaches(w, w, Reach::Plus));
    }

    #[test]
    fn rejects_two_cycle() {
        let err = Frame::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err, FrameError::Cyclic(vec!["a".into(), "b".into(), "a".into()]));
    }

    #[test]
    fn rejects_self_loop() {
        let err = Frame::new(&["a"], &[("a", "a")]).unwrap_err();
        assert!(matches!(err, FrameError::Cyclic(c) if c == ["a", "a"]));
    }

    #[test]
    fn rejects_unknown_and_duplicate_worlds() {
        assert_eq!(
            Frame::new(&["a"], &[("a", "b")]).unwrap_err(),
            FrameError::UnknownWorld("b".into())
        );
        assert_eq!(
            Frame::new(&["a", "a"], &[]).unwrap_err(),
            FrameError::DuplicateWorld("a".into())
        );
    }

    #[test]
    fn worlds_are_sorted_by_name() {
        let f = Frame::new(&["z", "m", "a"], &[("z", "a")]).unwrap();
        let names: Vec<&str> = f.worlds().map(|w| f.name(w)).collect();
        assert_eq!(names, ["a", "m", "z"]);
    }

    #[test]
    fn chain_closure() {
        let f = Frame::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(!f.is_transitive());
        let t = f.transitive_closure();
        assert!(t.is_transitive());
        let a = t.world("a").unwrap();
        assert_eq!(t.successors(a).len(), 2);
    }
}
