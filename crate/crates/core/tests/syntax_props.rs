mod common;

use common::*;
use cplkit::syntax::{
    ctx_leq, erase_neg, erase_pos, parse_frame, parse_prop, parse_sequent, polarize_ctx,
    polarize_neg, polarize_pos, AtomPolarity, Context, Frame, Judgment, PolContext, Polarity,
    Reach, Sequent,
};
use cplkit::validation::enumerate_formulas;
use proptest::prelude::*;

/// Reachability by repeated squaring of the adjacency matrix.
fn brute_closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

proptest! {
    #[test]
    fn frames_accept_exactly_acyclic_relations(
        n in 1usize..=5,
        raw in proptest::collection::vec((0usize..5, 0usize..5), 0..10),
    ) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let names = world_names(n);
        let named: Vec<(String, String)> = edges.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
        let closure = brute_closure(n, &edges);
        let cyclic = (0..n).any(|i| closure[i][i]);
        let built = Frame::new(&names, &named);
        prop_assert_eq!(built.is_err(), cyclic);
        if let Ok(f) = built {
            for a in 0..n {
                let wa = f.world(&names[a]).unwrap();
                for b in 0..n {
                    let wb = f.world(&names[b]).unwrap();
                    prop_assert_eq!(f.successors(wa).contains(&wb), edges.contains(&(a, b)));
                    prop_assert_eq!(f.reaches(wa, wb, Reach::Plus), closure[a][b]);
                    prop_assert_eq!(f.reaches(wa, wb, Reach::Star), a == b || closure[a][b]);
                }
            }
        }
    }

    #[test]
    fn ctx_leq_is_a_preorder(
        p in point_strategy(4, 4, 2),
        d1 in proptest::collection::vec(any::<bool>(), 4),
        e1 in proptest::collection::vec((prop_strategy(1), any::<usize>()), 0..3),
        d2 in proptest::collection::vec(any::<bool>(), 6),
        e2 in proptest::collection::vec((prop_strategy(1), any::<usize>()), 0..3),
    ) {
        let f = &p.frame;
        prop_assert!(ctx_leq(f, &p.ctx, &p.ctx, p.w));
        let g1 = grow(f, &p.ctx, p.w, &d1, &e1);
        let g2 = grow(f, &g1, p.w, &d2, &e2);
        prop_assert!(ctx_leq(f, &p.ctx, &g1, p.w));
        prop_assert!(ctx_leq(f, &g1, &g2, p.w));
        prop_assert!(ctx_leq(f, &p.ctx, &g2, p.w));
        if ctx_leq(f, &g1, &p.ctx, p.w) {
            // Mutual ⊆_w: equal on the ≺*-range of w.
            let range = |c: &Context| -> Vec<Judgment> {
                c.iter().filter(|j| f.reaches(p.w, j.world, Reach::Star)).cloned().collect()
            };
            prop_assert_eq!(range(&g1), range(&p.ctx));
        }
    }

    #[test]
    fn context_polarization_is_pointwise(p in point_strategy(3, 5, 3)) {
        let pol = AtomPolarity::all_positive();
        let whole = polarize_ctx(&p.ctx, &pol);
        let mut parts = PolContext::new();
        for j in &p.ctx {
            for pj in &polarize_ctx(&Context::from_iter([j.clone()]), &pol) {
                parts.insert(pj.clone()).unwrap();
            }
        }
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn sequent_text_round_trips(p in point_strategy(4, 4, 3)) {
        let f2 = parse_frame(&p.frame.to_text()).unwrap();
        prop_assert_eq!(&f2, &p.frame);
        let s = Sequent { ctx: p.ctx.clone(), goal: p.a.clone(), world: p.w };
        prop_assert_eq!(parse_sequent(&s.to_text(&p.frame), &p.frame).unwrap(), s);
        prop_assert_eq!(parse_prop(&p.a.to_string()).unwrap(), p.a);
    }
}

#[test]
fn erasure_inverts_polarization_exhaustively() {
    let mut neg_q = AtomPolarity::all_positive();
    neg_q.declare("q", Polarity::Negative).unwrap();
    for pol in [AtomPolarity::all_positive(), neg_q] {
        for a in enumerate_formulas(&["p", "q"], 4, true) {
            assert_eq!(erase_pos(&polarize_pos(&a, &pol)), a);
            assert_eq!(erase_neg(&polarize_neg(&a, &pol)), a);
        }
    }
}
