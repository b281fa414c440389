use cplkit::lp::{
    crosscheck, ground, immediate, query, random_program, saturate, saturate_with, stratify,
    GroundAtom, Mode, SaturateOptions, StratifiedProgram, Stratum,
};
use proptest::prelude::*;

fn prepared(seed: u64) -> StratifiedProgram {
    stratify(&ground(&random_program(seed, 3, 4)).unwrap()).unwrap()
}

/// Every ground atom over the program's predicates and constants.
fn herbrand_base(sp: &StratifiedProgram) -> Vec<GroundAtom> {
    let mut preds = std::collections::BTreeMap::new();
    let mut consts = std::collections::BTreeSet::new();
    for c in sp.rules1.iter().chain(&sp.rules2) {
        for a in std::iter::once(&c.head).chain(c.body.iter().map(|b| &b.0)) {
            preds.insert(a.pred.clone(), a.args.len());
            consts.extend(a.args.iter().cloned());
        }
    }
    let consts: Vec<_> = consts.into_iter().collect();
    let mut out = Vec::new();
    for (p, ar) in preds {
        let total = consts.len().pow(ar as u32);
        for k in 0..total {
            let mut rest = k;
            let args = (0..ar)
                .map(|_| {
                    let c = consts[rest % consts.len()].clone();
                    rest /= consts.len();
                    c
                })
                .collect();
            out.push(GroundAtom { pred: p.clone(), args });
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn saturation_is_order_and_mode_independent(seed in 0u64..10_000, shuffle in any::<u64>()) {
        let sp = prepared(seed);
        let reference = saturate(&sp);
        for mode in [Mode::Naive, Mode::SemiNaive] {
            let (db, log) = saturate_with(&sp, SaturateOptions { mode, shuffle_seed: Some(shuffle) });
            prop_assert_eq!(&db, &reference);
            // Stratum 1 finishes before stratum 2 starts.
            let first_two = log.iter().position(|e| e.stratum == Stratum::Two).unwrap_or(log.len());
            prop_assert!(log[first_two..].iter().all(|e| e.stratum == Stratum::Two));
            // Monotone: each round adds only atoms not seen before.
            let mut seen = std::collections::BTreeSet::new();
            for e in &log {
                prop_assert!(!e.derived.is_empty());
                for a in &e.derived {
                    prop_assert!(seen.insert((e.stratum, a.clone())));
                }
            }
        }
    }

    #[test]
    fn saturation_is_idempotent(seed in 0u64..10_000) {
        let sp = prepared(seed);
        let db = saturate(&sp);
        prop_assert!(immediate(&sp, Stratum::One, &db).is_empty());
        prop_assert!(immediate(&sp, Stratum::Two, &db).is_empty());
    }

    #[test]
    fn saturation_agrees_with_the_focused_prover(seed in 0u64..10_000) {
        let sp = prepared(seed);
        let db = saturate(&sp);
        for a in herbrand_base(&sp) {
            prop_assert_eq!(crosscheck(&sp, &a), query(&sp, &db, &a), "{}", a);
        }
    }
}
