use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;

use super::{Atom, Clause, GroundAtom, LpError, Program, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundClause {
    pub head: GroundAtom,
    /// `(atom, negated)`.
    pub body: Vec<(GroundAtom, bool)>,
    /// Index of the source clause.
    pub source: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundProgram {
    pub clauses: Vec<GroundClause>,
    pub sources: Vec<Clause>,
}

/// Instantiates every clause over all constants occurring in the program.
pub fn ground(program: &Program) -> Result<GroundProgram, LpError> {
    let mut consts = BTreeSet::new();
    let mut any_var = false;
    for c in &program.clauses {
        for a in std::iter::once(&c.head).chain(c.body.iter().map(|l| &l.atom)) {
            for t in &a.args {
                match t {
                    Term::Const(k) => {
                        consts.insert(k.clone());
                    }
                    Term::Var(_) => any_var = true,
                }
            }
        }
    }
    if any_var && consts.is_empty() {
        return Err(LpError::EmptyDomain);
    }
    let consts: Vec<Arc<str>> = consts.into_iter().collect();
    let mut clauses = Vec::new();
    for (idx, c) in program.clauses.iter().enumerate() {
        let mut vars: Vec<Arc<str>> = Vec::new();
        for a in std::iter::once(&c.head).chain(c.body.iter().map(|l| &l.atom)) {
            for t in &a.args {
                if let Term::Var(v) = t {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        let total = consts.len().pow(vars.len() as u32);
        for k in 0..total {
            let mut sub = HashMap::new();
            let mut rest = k;
            for v in vars.iter().rev() {
                sub.insert(v.clone(), consts[rest % consts.len()].clone());
                rest /= consts.len();
            }
            let inst = |a: &Atom| GroundAtom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(k) => k.clone(),
                        Term::Var(v) => sub[v].clone(),
                    })
                    .collect(),
            };
            clauses.push(GroundClause {
                head: inst(&c.head),
                body: c.body.iter().map(|l| (inst(&l.atom), l.negated)).collect(),
                source: idx,
            });
        }
    }
    Ok(GroundProgram { clauses, sources: program.clauses.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedProgram {
    pub strata: BTreeMap<Arc<str>, Stratum>,
    pub rules1: Vec<GroundClause>,
    pub rules2: Vec<GroundClause>,
    pub sources: Vec<Clause>,
}

impl StratifiedProgram {
    /// Predicates never defined or mentioned default to stratum 1.
    pub fn stratum_of(&self, pred: &str) -> Stratum {
        self.strata.get(pred).copied().unwrap_or(Stratum::One)
    }
}

/// Assigns each predicate its minimal stratum; negation must point strictly
/// downward and at most two strata may be used.
pub fn stratify(gp: &GroundProgram) -> Result<StratifiedProgram, LpError> {
    let mut g: DiGraph<Arc<str>, (bool, usize)> = DiGraph::new();
    let mut node: BTreeMap<Arc<str>, NodeIndex> = BTreeMap::new();
    let mut id = |g: &mut DiGraph<Arc<str>, (bool, usize)>, p: &Arc<str>| {
        *node.entry(p.clone()).or_insert_with(|| g.add_node(p.clone()))
    };
    for c in &gp.sources {
        let h = id(&mut g, &c.head.pred);
        for l in &c.body {
            let b = id(&mut g, &l.atom.pred);
            g.add_edge(h, b, (l.negated, c.line));
        }
    }
    let cite = |line: usize| {
        gp.sources.iter().find(|c| c.line == line).map(|c| c.to_string()).unwrap_or_default()
    };
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0; g.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for &n in scc {
            comp[n.index()] = i;
        }
    }
    for e in g.edge_indices() {
        let (a, b) = g.edge_endpoints(e).unwrap();
        let (neg, line) = g[e];
        if neg && comp[a.index()] == comp[b.index()] {
            return Err(LpError::Unstratifiable { line, clause: cite(line), pred: g[b].to_string() });
        }
    }
    // Tarjan yields components callees-first, so one pass suffices.
    let mut level = vec![1u32; sccs.len()];
    for (i, scc) in sccs.iter().enumerate() {
        let mut lv = 1;
        for &n in scc {
            for e in g.edges(n) {
                let t = comp[e.target().index()];
                if t != i {
                    lv = lv.max(level[t] + e.weight().0 as u32);
                }
            }
        }
        level[i] = lv;
        if lv > 2 {
            let line = scc
                .iter()
                .flat_map(|&n| g.edges(n))
                .find(|e| {
                    let t = comp[e.target().index()];
                    t != i && level[t] + e.weight().0 as u32 > 2
                })
                .map(|e| e.weight().1)
                .expect("some edge raised the level");
            return Err(LpError::TooManyStrata { line, clause: cite(line), pred: g[scc[0]].to_string() });
        }
    }
    let strata: BTreeMap<Arc<str>, Stratum> = node
        .iter()
        .map(|(p, n)| (p.clone(), if level[comp[n.index()]] == 1 { Stratum::One } else { Stratum::Two }))
        .collect();
    let mut rules1 = Vec::new();
    let mut rules2 = Vec::new();
    for c in &gp.clauses {
        match strata[&c.head.pred] {
            Stratum::One => rules1.push(c.clone()),
            Stratum::Two => rules2.push(c.clone()),
        }
    }
    Ok(StratifiedProgram { strata, rules1, rules2, sources: gp.sources.clone() })
}
