mod common;

use common::*;
use cplkit::cpl::CplProver;
use cplkit::focused::{check_foc, polarized_sequent, prove_neg, prove_neg_with, FocProver};
use cplkit::syntax::{AtomPolarity, Polarity};
use cplkit::validation::{gen_frames, random_context, random_prop};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn emitted_proofs_respect_phases_and_worlds(p in point_strategy(4, 3, 3)) {
        let pos = AtomPolarity::all_positive();
        let seq = polarized_sequent(&p.ctx, &p.a, p.w, &pos);
        if let Some(proof) = prove_neg(&p.frame, &p.ctx, &p.a, p.w).proof() {
            let stats = check_foc(&p.frame, &seq, proof);
            prop_assert!(stats.is_ok(), "{:?}", stats);
            prop_assert!(stats.unwrap().max_omega <= 1);
        }
    }

    #[test]
    fn provability_ignores_atom_polarity(p in point_strategy(4, 3, 3)) {
        let mut neg = AtomPolarity::all_positive();
        neg.declare("q", Polarity::Negative).unwrap();
        let a = prove_neg(&p.frame, &p.ctx, &p.a, p.w);
        let b = prove_neg_with(&p.frame, &p.ctx, &p.a, p.w, &neg);
        prop_assert_eq!(a.is_provable(), b.is_provable());
        if let Some(proof) = b.proof() {
            let seq = polarized_sequent(&p.ctx, &p.a, p.w, &neg);
            prop_assert!(check_foc(&p.frame, &seq, proof).is_ok());
        }
    }

    #[test]
    fn search_fits_a_step_budget(p in point_strategy(5, 4, 3)) {
        let seq = polarized_sequent(&p.ctx, &p.a, p.w, &AtomPolarity::all_positive());
        prop_assert!(FocProver::new().budget(2_000_000).decide(&p.frame, &seq).is_ok());
    }
}

/// The commit optimization must not change any verdict in either decider.
#[test]
fn commit_matches_full_backtracking_at_scale() {
    let battery = gen_frames(11, 60, 4, false);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pos = AtomPolarity::all_positive();
    let mut provable = 0;
    for i in 0..40000 {
        let f = &battery.frames[i % battery.frames.len()];
        let ctx = random_context(&mut rng, f, 4, 2);
        let a = random_prop(&mut rng, 4);
        let w = f.worlds().nth(rng.gen_range(0..f.len())).unwrap();
        let c1 = CplProver::new().decide(f, &ctx, &a, w).unwrap().is_provable();
        let c2 = CplProver::new().commit_on_growth(false).decide(f, &ctx, &a, w).unwrap().is_provable();
        assert_eq!(c1, c2, "cpl: {} => {a} @ {}", ctx.display(f), f.name(w));
        let seq = polarized_sequent(&ctx, &a, w, &pos);
        let s1 = FocProver::new().decide(f, &seq).unwrap().is_provable();
        let s2 = FocProver::new().commit_on_growth(false).decide(f, &seq).unwrap().is_provable();
        assert_eq!(s1, s2, "cpl*: {} => {a} @ {}", ctx.display(f), f.name(w));
        provable += c1 as usize;
    }
    // Both verdicts must actually occur for the comparison to mean anything.
    assert!(provable > 4000 && provable < 36000, "{provable}");
}
