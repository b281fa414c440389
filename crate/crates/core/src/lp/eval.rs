use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GroundAtom, GroundClause, StratifiedProgram, Stratum};
use crate::focused::{decide_foc, FocSequent};
use crate::syntax::{Frame, Neg, PolContext, PolJudgment, Pos, World};

fn two_worlds() -> Frame {
    Frame::new(&["beta", "gamma"], &[("beta", "gamma")]).expect("beta ≺ gamma is acyclic")
}

fn world_of(frame: &Frame, s: Stratum) -> World {
    frame.world(if s == Stratum::One { "gamma" } else { "beta" }).expect("fixed frame")
}

fn atom(a: &GroundAtom) -> Pos {
    Pos::atom(&a.to_string())
}

/// Stratum-2 premise encoding: own-stratum atoms stay, stratum-1 atoms are
/// boxed, and negated ones become `↓(□q ⊃ ↑⊥)`.
fn premise(sp: &StratifiedProgram, a: &GroundAtom, negated: bool) -> Pos {
    match (sp.stratum_of(&a.pred), negated) {
        (Stratum::Two, _) => atom(a),
        (Stratum::One, false) => Pos::boxed(atom(a)),
        (Stratum::One, true) => Pos::down(Neg::imp(Pos::boxed(atom(a)), Neg::up(Pos::Bot))),
    }
}

fn clause_prop(sp: &StratifiedProgram, c: &GroundClause, s: Stratum) -> Pos {
    let mut n = Neg::up(atom(&c.head));
    for (a, negated) in c.body.iter().rev() {
        let p = match s {
            Stratum::One => atom(a),
            Stratum::Two => premise(sp, a, *negated),
        };
        n = Neg::imp(p, n);
    }
    Pos::down(n)
}

/// Compiles the program into a polarized context over `beta ≺ gamma`.
pub fn translate(sp: &StratifiedProgram) -> (Frame, PolContext) {
    let frame = two_worlds();
    let mut ctx = PolContext::new();
    for (rules, s) in [(&sp.rules1, Stratum::One), (&sp.rules2, Stratum::Two)] {
        for c in rules {
            let j = PolJudgment::new(clause_prop(sp, c, s), world_of(&frame, s));
            ctx.insert(j).expect("clause encodings are stable");
        }
    }
    (frame, ctx)
}

/// Derived atoms: stratum 1 at `gamma`, stratum 2 at `beta`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub gamma: BTreeSet<GroundAtom>,
    pub beta: BTreeSet<GroundAtom>,
}

impl Database {
    pub fn len(&self) -> usize {
        self.gamma.len() + self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn at(&self, s: Stratum) -> &BTreeSet<GroundAtom> {
        match s {
            Stratum::One => &self.gamma,
            Stratum::Two => &self.beta,
        }
    }

    fn at_mut(&mut self, s: Stratum) -> &mut BTreeSet<GroundAtom> {
        match s {
            Stratum::One => &mut self.gamma,
            Stratum::Two => &mut self.beta,
        }
    }

    /// Sorted `atom@world` lines.
    pub fn lines(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .gamma
            .iter()
            .map(|a| format!("{a}@gamma"))
            .chain(self.beta.iter().map(|a| format!("{a}@beta")))
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn rules(sp: &StratifiedProgram, s: Stratum) -> &[GroundClause] {
    match s {
        Stratum::One => &sp.rules1,
        Stratum::Two => &sp.rules2,
    }
}

fn fires(sp: &StratifiedProgram, c: &GroundClause, db: &Database) -> bool {
    c.body.iter().all(|(a, negated)| db.at(sp.stratum_of(&a.pred)).contains(a) != *negated)
}

/// Heads of `stratum` rules whose bodies hold in `db` and that are not yet
/// in `db`. Negated premises are read against the stratum-1 part of `db`.
pub fn immediate(sp: &StratifiedProgram, stratum: Stratum, db: &Database) -> BTreeSet<GroundAtom> {
    rules(sp, stratum)
        .iter()
        .filter(|c| !db.at(stratum).contains(&c.head) && fires(sp, c, db))
        .map(|c| c.head.clone())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Naive,
    SemiNaive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SaturateOptions {
    pub mode: Mode,
    /// Shuffles rule order within each stratum before evaluation.
    pub shuffle_seed: Option<u64>,
}

/// One round of derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub stratum: Stratum,
    pub round: usize,
    pub derived: Vec<GroundAtom>,
}

pub fn saturate(sp: &StratifiedProgram) -> Database {
    saturate_with(sp, SaturateOptions::default()).0
}

/// Saturates stratum 1, then stratum 2, logging each productive round.
pub fn saturate_with(sp: &StratifiedProgram, opts: SaturateOptions) -> (Database, Vec<Event>) {
    let mut db = Database::default();
    let mut log = Vec::new();
    let mut rng = opts.shuffle_seed.map(ChaCha8Rng::seed_from_u64);
    for s in [Stratum::One, Stratum::Two] {
        let mut rs: Vec<&GroundClause> = rules(sp, s).iter().collect();
        if let Some(r) = rng.as_mut() {
            rs.shuffle(r);
        }
        let mut delta: Option<BTreeSet<GroundAtom>> = None;
        for round in 1.. {
            let mut new = BTreeSet::new();
            for c in &rs {
                if db.at(s).contains(&c.head) || new.contains(&c.head) {
                    continue;
                }
                // Semi-naive: after the first round only rules touching the
                // last delta can newly fire.
                if let (Mode::SemiNaive, Some(d)) = (opts.mode, &delta) {
                    if !c.body.iter().any(|(a, neg)| !neg && d.contains(a)) {
                        continue;
                    }
                }
                if fires(sp, c, &db) {
                    new.insert(c.head.clone());
                }
            }
            if new.is_empty() {
                break;
            }
            db.at_mut(s).extend(new.iter().cloned());
            log.push(Event { stratum: s, round, derived: new.iter().cloned().collect() });
            delta = Some(new);
        }
    }
    (db, log)
}

/// Membership at the atom's stratum world.
pub fn query(sp: &StratifiedProgram, db: &Database, a: &GroundAtom) -> bool {
    db.at(sp.stratum_of(&a.pred)).contains(a)
}

/// Decides `Γ; · ⊢ ↑a[w]` in the focused calculus, `w` the atom's stratum world.
pub fn crosscheck(sp: &StratifiedProgram, a: &GroundAtom) -> bool {
    let (frame, ctx) = translate(sp);
    let w = world_of(&frame, sp.stratum_of(&a.pred));
    decide_foc(&frame, &FocSequent::neutral(ctx, Neg::up(atom(a)), w)).is_provable()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{ground, parse_program, stratify};

    const GRAPH: &str = "edge(a,b).\n\
                         edge(Y,X) :- edge(X,Y).\n\
                         path(X,Y) :- edge(X,Y).\n\
                         path(X,Z) :- edge(X,Y), path(Y,Z).\n\
                         noedge(X,Y) :- path(X,Y), !edge(X,Y).\n";

    fn prog(src: &str) -> StratifiedProgram {
        stratify(&ground(&parse_program(src).unwrap()).unwrap()).unwrap()
    }

    fn ga(s: &str) -> GroundAtom {
        crate::lp::parse_atom(s).unwrap()
    }

    #[test]
    fn translation_shapes() {
        let sp = prog(GRAPH);
        let (frame, ctx) = translate(&sp);
        let shown: Vec<String> = ctx.iter().map(|j| format!("{}", j.prop)).collect();
        assert!(shown.contains(&"↓↑edge(a,b)+".to_string()));
        assert!(shown.contains(&"↓(edge(a,b)+ ⊃ ↑path(a,b)+)".to_string()));
        assert!(shown
            .contains(&"↓(□path(a,a)+ ⊃ ↓(□edge(a,a)+ ⊃ ↑⊥) ⊃ ↑noedge(a,a)+)".to_string()));
        let beta = frame.world("beta").unwrap();
        assert_eq!(ctx.iter().filter(|j| j.world == beta).count(), 4);
    }

    #[test]
    fn immediate_steps() {
        let sp = prog("edge(a,b).\nedge(Y,X) :- edge(X,Y).");
        let mut db = Database::default();
        db.gamma.insert(ga("edge(a,b)"));
        assert_eq!(immediate(&sp, Stratum::One, &db), BTreeSet::from([ga("edge(b,a)")]));
        let full = saturate(&sp);
        assert!(immediate(&sp, Stratum::One, &full).is_empty());

        let sp = prog(GRAPH);
        let mut db = Database::default();
        db.gamma.insert(ga("path(a,a)"));
        assert!(immediate(&sp, Stratum::Two, &db).contains(&ga("noedge(a,a)")));
    }

    #[test]
    fn graph_saturation() {
        let sp = prog(GRAPH);
        let db = saturate(&sp);
        let gamma: BTreeSet<_> = ["edge(a,b)", "edge(b,a)", "path(a,b)", "path(b,a)", "path(a,a)", "path(b,b)"]
            .into_iter()
            .map(ga)
            .collect();
        assert_eq!(db.gamma, gamma);
        assert_eq!(db.beta, BTreeSet::from([ga("noedge(a,a)"), ga("noedge(b,b)")]));
        assert!(query(&sp, &db, &ga("noedge(a,a)")));
        assert!(!query(&sp, &db, &ga("noedge(a,b)")));
        assert!(!query(&sp, &db, &ga("frobnicate(a)")));
        assert!(saturate(&prog("")).is_empty());
    }

    #[test]
    fn modes_and_orders_agree() {
        let sp = prog(GRAPH);
        let reference = saturate(&sp);
        for seed in 0..8 {
            for mode in [Mode::Naive, Mode::SemiNaive] {
                let (db, log) = saturate_with(&sp, SaturateOptions { mode, shuffle_seed: Some(seed) });
                assert_eq!(db, reference);
                let first_two = log.iter().position(|e| e.stratum == Stratum::Two).unwrap();
                assert!(log[first_two..].iter().all(|e| e.stratum == Stratum::Two));
            }
        }
    }

    #[test]
    fn crosscheck_agrees_on_graph() {
        let sp = prog(GRAPH);
        let db = saturate(&sp);
        for p in ["edge", "path", "noedge"] {
            for x in ["a", "b"] {
                for y in ["a", "b"] {
                    let a = GroundAtom::new(p, &[x, y]);
                    assert_eq!(crosscheck(&sp, &a), query(&sp, &db, &a), "{a}");
                }
            }
        }
        assert!(!crosscheck(&prog(""), &ga("p")));
    }

    #[test]
    fn display_is_sorted() {
        let db = saturate(&prog("q. p :- !r."));
        assert_eq!(db.to_string(), "p@beta\nq@gamma\n");
    }
}
