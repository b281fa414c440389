use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{first_failure, gen_frames, points, universal, Counterexample, FrameBattery, Report, Samples, Verdict};
use crate::cpl::provable_cpl;
use crate::syntax::{parse_prop, running_frame, Context, Frame, Judgment, Prop, World};
use crate::Logic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expected {
    Valid,
    Invalid,
    /// Open; the verdict is reported but never counted as a deviation.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrameCondition {
    Any,
    Transitive,
}

#[derive(Clone, Debug)]
pub struct Schema {
    pub name: &'static str,
    /// Template over the metavariables `A`, `B`, `C`.
    pub template: Prop,
    pub frames: FrameCondition,
    pub cpl: Expected,
    pub cpl_star: Expected,
}

impl Schema {
    pub fn expected(&self, logic: Logic) -> Expected {
        match logic {
            Logic::Cpl => self.cpl,
            Logic::CplStar => self.cpl_star,
        }
    }

    pub fn metavariables(&self) -> Vec<String> {
        self.template.atoms().iter().map(|a| a.to_string()).collect()
    }

    /// All instantiations over the samples for up to two metavariables,
    /// otherwise 64 seeded ones.
    pub fn instances(&self, samples: &Samples) -> Vec<Prop> {
        let vars = self.metavariables();
        let fs = &samples.formulas;
        let assignments: Vec<Vec<&Prop>> = if vars.len() <= 2 {
            let mut acc: Vec<Vec<&Prop>> = vec![vec![]];
            for _ in &vars {
                acc = acc.into_iter().flat_map(|v| fs.iter().map(move |f| [v.clone(), vec![f]].concat())).collect();
            }
            acc
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(samples.seed);
            (0..64).map(|_| vars.iter().map(|_| fs.choose(&mut rng).unwrap()).collect()).collect()
        };
        assignments
            .into_iter()
            .map(|asg| {
                let m: BTreeMap<&str, &Prop> = vars.iter().map(String::as_str).zip(asg).collect();
                self.template.instantiate(&|n| m.get(n).map(|p| (*p).clone()))
            })
            .collect()
    }
}

fn p(s: &str) -> Prop {
    parse_prop(s).expect("schema templates parse")
}

/// The axiom schemas with their expected status per logic.
pub fn schemas() -> Vec<Schema> {
    use Expected::*;
    use FrameCondition::*;
    let s = |name, t: &str, frames, cpl, cpl_star| Schema { name, template: p(t), frames, cpl, cpl_star };
    vec![
        s("(I)", "A -> A", Any, Valid, Valid),
        s("(K)", "A -> B -> A", Any, Valid, Valid),
        s("(S)", "(A -> B -> C) -> (A -> B) -> A -> C", Any, Valid, Valid),
        s("(⊥E)", "bot -> A", Any, Valid, Valid),
        s("(K□)", "box (A -> B) -> box A -> box B", Any, Valid, Valid),
        s("(K◇)", "box (A -> B) -> dia A -> dia B", Any, Valid, Valid),
        s("(4□)", "box A -> box box A", Transitive, Valid, Valid),
        s("(GL)", "box (box A -> A) -> box A", Transitive, Valid, Valid),
        s("(◇⊥)", "~dia bot", Any, Invalid, Valid),
        s("(4◇)", "dia dia A -> dia A", Transitive, Unknown, Valid),
        s("(◇A⊃□B)⊃□(A⊃B)", "(dia A -> box B) -> box (A -> B)", Any, Invalid, Invalid),
        s("◇¬A⊃¬□A", "dia ~A -> ~box A", Any, Invalid, Valid),
        s("□¬A⊃¬◇A", "box ~A -> ~dia A", Any, Invalid, Valid),
        s("¬◇A⊃□¬A", "~dia A -> box ~A", Any, Invalid, Invalid),
        s("¬□A⊃◇¬A", "~box A -> dia ~A", Any, Invalid, Invalid),
    ]
}

/// Checks every instance at every battery point.
pub fn check_schema(schema: &Schema, battery: &FrameBattery, samples: &Samples, logic: Logic) -> Report {
    debug_assert!(schema.frames == FrameCondition::Any || battery.frames.iter().all(Frame::is_transitive));
    let inst = schema.instances(samples);
    let (cx, checks) = first_failure(logic, battery, samples, &inst);
    Report {
        name: schema.name.to_string(),
        logic,
        frames: battery.frames.len(),
        instances: inst.len(),
        checks,
        verdict: if cx.is_some() { Verdict::Invalid } else { Verdict::Valid },
        expected: schema.expected(logic),
        counterexample: cx,
    }
}

/// Samples plus every implication between two samples.
fn pool(samples: &Samples) -> Vec<Prop> {
    let fs = &samples.formulas;
    let mut out = fs.clone();
    for a in fs {
        for b in fs {
            out.push(Prop::imp(a.clone(), b.clone()));
        }
    }
    out
}

/// Universal provability of each formula, keyed by formula.
fn universality(logic: Logic, battery: &FrameBattery, samples: &Samples, fs: &[Prop]) -> BTreeMap<Prop, Option<Counterexample>> {
    fs.iter()
        .map(|a| (a.clone(), first_failure(logic, battery, samples, std::slice::from_ref(a)).0))
        .collect()
}

fn rule_report(name: &str, logic: Logic, battery: &FrameBattery, instances: usize, violation: Option<Counterexample>) -> Report {
    Report {
        name: name.to_string(),
        logic,
        frames: battery.frames.len(),
        instances,
        checks: 0,
        verdict: if violation.is_some() { Verdict::Invalid } else { Verdict::Valid },
        expected: Expected::Valid,
        counterexample: violation,
    }
}

/// Modus ponens: whenever `A ⊃ B` and `A` are universal over the battery,
/// so is `B`. `A` ranges over the universal members of the pool, `B` over
/// the samples.
pub fn mp_check(battery: &FrameBattery, samples: &Samples, logic: Logic) -> Report {
    let u = universality(logic, battery, samples, &pool(samples));
    let mut violation = None;
    let mut applied = 0;
    'outer: for a in u.iter().filter(|x| x.1.is_none()).map(|x| x.0) {
        for b in &samples.formulas {
            if universal(logic, battery, samples, &Prop::imp(a.clone(), b.clone())) {
                applied += 1;
                if let Some(cx) = &u[b] {
                    violation = Some(cx.clone());
                    break 'outer;
                }
            }
        }
    }
    rule_report("(MP)", logic, battery, applied, violation)
}

/// Necessitation: a universal `A` has a universal `□A`.
pub fn nec_check(battery: &FrameBattery, samples: &Samples, logic: Logic) -> Report {
    let fs = pool(samples);
    let u = universality(logic, battery, samples, &fs);
    let mut applied = 0;
    let mut violation = None;
    for a in fs.iter().filter(|a| u[*a].is_none()) {
        applied += 1;
        let (cx, _) = first_failure(logic, battery, samples, &[Prop::boxed(a.clone())]);
        if cx.is_some() {
            violation = cx;
            break;
        }
    }
    rule_report("(NEC)", logic, battery, applied, violation)
}

/// Löb's rule: a universal `□A ⊃ A` has a universal `A`.
pub fn lob_check(battery: &FrameBattery, samples: &Samples, logic: Logic) -> Report {
    let fs = pool(samples);
    let mut applied = 0;
    let mut violation = None;
    for a in &fs {
        if universal(logic, battery, samples, &Prop::imp(Prop::boxed(a.clone()), a.clone())) {
            applied += 1;
            let (cx, _) = first_failure(logic, battery, samples, std::slice::from_ref(a));
            if cx.is_some() {
                violation = cx;
                break;
            }
        }
    }
    rule_report("(Löb)", logic, battery, applied, violation)
}

/// The two De Morgan laws that hold in CPL*. For CPL they are only required
/// at points with no immediate successor `w′` where `Γ ⇒ ⊥[w′]`.
pub fn demorgan_check(battery: &FrameBattery, samples: &Samples, logic: Logic) -> Vec<Report> {
    let laws = [("◇¬A⊃¬□A", "dia ~A -> ~box A"), ("□¬A⊃¬◇A", "box ~A -> ~dia A")];
    let pts = points(battery, samples);
    let eligible: Vec<&(usize, Context, World)> = pts
        .iter()
        .filter(|(i, ctx, w)| {
            logic == Logic::CplStar || {
                let f = &battery.frames[*i];
                !f.successors(*w).iter().any(|&v| provable_cpl(f, ctx, &Prop::Bot, v))
            }
        })
        .collect();
    laws.iter()
        .map(|(name, t)| {
            let schema = Schema {
                name,
                template: p(t),
                frames: FrameCondition::Any,
                cpl: Expected::Valid,
                cpl_star: Expected::Valid,
            };
            let inst = schema.instances(samples);
            let results: Vec<Option<Counterexample>> = eligible
                .par_iter()
                .map(|(i, ctx, w)| {
                    let f = &battery.frames[*i];
                    inst.iter().find(|a| !logic.provable(f, ctx, a, *w)).map(|a| Counterexample {
                        frame: f.clone(),
                        ctx: ctx.clone(),
                        world: *w,
                        prop: a.clone(),
                    })
                })
                .collect();
            let cx = results.into_iter().flatten().next();
            let suffix = if logic == Logic::Cpl { " | consistent successors" } else { "" };
            Report {
                name: format!("{name}{suffix}"),
                logic,
                frames: battery.frames.len(),
                instances: inst.len(),
                checks: eligible.len() * inst.len(),
                verdict: if cx.is_some() { Verdict::Invalid } else { Verdict::Valid },
                expected: Expected::Valid,
                counterexample: cx,
            }
        })
        .collect()
}

/// A pinned instance that the decider must refute.
#[derive(Clone, Debug)]
pub struct Countermodel {
    pub name: &'static str,
    pub frame: Frame,
    pub ctx: Context,
    pub prop: Prop,
    pub world: World,
}

impl Countermodel {
    pub fn refuted(&self, logic: Logic) -> bool {
        !logic.provable(&self.frame, &self.ctx, &self.prop, self.world)
    }
}

fn frame(worlds: &[&str], edges: &[(&str, &str)]) -> Frame {
    Frame::new(worlds, edges).expect("pinned frames are acyclic")
}

/// Fixed regression instances, each expected to be refuted in `logic`.
pub fn known_countermodels(logic: Logic) -> Vec<Countermodel> {
    let rf = running_frame();
    let at = |f: &Frame, n: &str| f.world(n).unwrap();
    let ctx = |f: &Frame, js: &[(&str, &str)]| -> Context {
        js.iter().map(|(a, w)| Judgment::new(p(a), at(f, w))).collect()
    };
    let line = frame(&["u", "v"], &[("u", "v")]);
    let fork = frame(&["u", "v", "x"], &[("u", "v"), ("u", "x")]);
    let cm = |name, f: &Frame, c: Context, a: &str, w: &str| Countermodel {
        name,
        frame: f.clone(),
        ctx: c,
        prop: p(a),
        world: at(f, w),
    };
    let mut out = Vec::new();
    if logic == Logic::Cpl {
        out.push(cm("¬◇A⊃□¬A", &rf, ctx(&rf, &[("q", "alpha")]), "~dia q -> box ~q", "alpha"));
        out.push(cm("(◇⊥)", &line, ctx(&line, &[("bot", "v")]), "~dia bot", "u"));
        out.push(cm("◇¬A⊃¬□A", &line, ctx(&line, &[("bot", "v")]), "dia ~q -> ~box q", "u"));
        out.push(cm("□¬A⊃¬◇A", &line, ctx(&line, &[("bot", "v")]), "box ~q -> ~dia q", "u"));
    }
    out.push(cm("¬◇A⊃□¬A", &line, Context::new(), "~dia ~q -> box ~~q", "u"));
    out.push(cm("¬□A⊃◇¬A", &line, Context::new(), "~box q -> dia ~q", "u"));
    out.push(cm("(◇A⊃□B)⊃□(A⊃B)", &fork, Context::new(), "(dia q -> box p) -> box (q -> p)", "u"));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub frames: usize,
    pub max_worlds: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2011, frames: 50, max_worlds: 5 }
    }
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub config: SuiteConfig,
    pub rows: Vec<Report>,
    /// Pinned instances with their replay verdict.
    pub countermodels: Vec<(Logic, Countermodel, bool)>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| !r.deviates()) && self.countermodels.iter().all(|c| c.2)
    }

    pub fn row(&self, name: &str, logic: Logic) -> Option<&Report> {
        self.rows.iter().find(|r| r.name == name && r.logic == logic)
    }

    /// Fixed-column text table.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<40} {:<5} {:>6} {:>9}  {:<8} {}",
            "schema", "logic", "frames", "instances", "verdict", "status"
        );
        for r in &self.rows {
            let verdict = match r.verdict {
                Verdict::Valid => "valid",
                Verdict::Invalid => "invalid",
            };
            let status = if r.expected == Expected::Unknown {
                "reported, unconfirmed by the paper"
            } else if r.deviates() {
                "DEVIATION"
            } else if r.inconclusive() {
                "no countermodel in battery"
            } else {
                "expected"
            };
            let _ = writeln!(
                s,
                "{:<40} {:<5} {:>6} {:>9}  {:<8} {}",
                r.name,
                r.logic.name(),
                r.frames,
                r.instances,
                verdict,
                status
            );
        }
        for (logic, c, ok) in &self.countermodels {
            let name = format!("{} @ {}", c.name, c.frame.name(c.world));
            let status = if *ok { "expected" } else { "DEVIATION" };
            let verdict = if *ok { "refuted" } else { "provable" };
            let _ = writeln!(s, "{:<40} {:<5} {:>6} {:>9}  {:<8} {}", name, logic.name(), 1, 1, verdict, status);
        }
        s
    }
}

/// Runs every schema, rule and pinned countermodel for both logics.
pub fn run_suite(config: SuiteConfig) -> Suite {
    let any = gen_frames(config.seed, config.frames, config.max_worlds.max(1), false);
    let trans = any.transitive();
    let samples = Samples::standard(config.seed);
    let mut rows = Vec::new();
    for logic in [Logic::Cpl, Logic::CplStar] {
        rows.push(mp_check(&any, &samples, logic));
        rows.push(nec_check(&any, &samples, logic));
        for s in schemas() {
            let b = match s.frames {
                FrameCondition::Any => &any,
                FrameCondition::Transitive => &trans,
            };
            rows.push(check_schema(&s, b, &samples, logic));
        }
        rows.push(lob_check(&any, &samples, logic));
        rows.extend(demorgan_check(&any, &samples, logic));
    }
    let countermodels = [Logic::Cpl, Logic::CplStar]
        .into_iter()
        .flat_map(|l| known_countermodels(l).into_iter().map(move |c| (l, c.clone(), c.refuted(l))))
        .collect();
    Suite { config, rows, countermodels }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_counts() {
        let s = Samples::standard(0);
        let all = schemas();
        let by = |n: &str| all.iter().find(|x| x.name == n).unwrap().instances(&s).len();
        assert_eq!(by("(I)"), 10);
        assert_eq!(by("(K)"), 100);
        assert_eq!(by("(S)"), 64);
        assert_eq!(by("(◇⊥)"), 1);
    }

    #[test]
    fn small_battery() {
        let b = gen_frames(5, 6, 3, false);
        let s = Samples::standard(5);
        let all = schemas();
        for logic in [Logic::Cpl, Logic::CplStar] {
            let r = check_schema(&all[0], &b, &s, logic);
            assert_eq!(r.verdict, Verdict::Valid);
        }
        let dm3 = all.iter().find(|x| x.name == "¬◇A⊃□¬A").unwrap();
        let b = gen_frames(2011, 20, 4, false);
        for logic in [Logic::Cpl, Logic::CplStar] {
            let r = check_schema(dm3, &b, &s, logic);
            let cx = r.counterexample.expect("a countermodel exists in a small battery");
            assert!(cx.replays_refuted(logic));
        }
    }

    #[test]
    fn pinned_countermodels_replay() {
        for logic in [Logic::Cpl, Logic::CplStar] {
            for c in known_countermodels(logic) {
                assert!(c.refuted(logic), "{} in {}", c.name, logic.name());
            }
        }
    }

    #[test]
    fn degenerate_battery_passes() {
        let s = run_suite(SuiteConfig { seed: 2011, frames: 1, max_worlds: 1 });
        assert!(s.passed(), "{}", s.table());
        assert!(s.rows.iter().any(|r| r.inconclusive()));
    }
}
