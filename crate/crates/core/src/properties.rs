//! Property tests over random small games.

use proptest::prelude::*;

use crate::analyzer::oracle_solve;
use crate::game::{ParityGame, Player, PositionSet};
use crate::harness::{parse_pgsolver, write_pgsolver};
use crate::solver::{solve, solve_scc_wise, SolverConfig, Variant};

fn arb_game(max_n: usize) -> impl Strategy<Value = ParityGame> {
    (1..=max_n)
        .prop_flat_map(|n| {
            prop::collection::vec(
                (any::<bool>(), 0u32..7, prop::collection::vec(0..n, 1..=3)),
                n,
            )
        })
        .prop_map(|rows| {
            let mut owner = Vec::new();
            let mut priority = Vec::new();
            let mut successors = Vec::new();
            for (odd, p, mut succ) in rows {
                succ.sort_unstable();
                succ.dedup();
                owner.push(if odd { Player::Odd } else { Player::Even });
                priority.push(p);
                successors.push(succ);
            }
            ParityGame::new(owner, priority, successors).unwrap()
        })
}

fn arb_player() -> impl Strategy<Value = Player> {
    prop_oneof![Just(Player::Even), Just(Player::Odd)]
}

fn subset(n: usize, mask: u64) -> PositionSet {
    PositionSet::from_positions(n, (0..n).filter(|i| mask >> i & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn attractor_is_monotone_idempotent_and_extensive(
        g in arb_game(8), a in any::<u64>(), b in any::<u64>(), p in arb_player()
    ) {
        let n = g.len();
        let full = g.full();
        let small = subset(n, a & b);
        let large = subset(n, a);
        let atr_small = full.attractor(&small, p).unwrap();
        let atr_large = full.attractor(&large, p).unwrap();
        prop_assert!(small.is_subset(&atr_small));
        prop_assert!(atr_small.is_subset(&atr_large));
        prop_assert_eq!(full.attractor(&atr_large, p).unwrap(), atr_large);
    }

    #[test]
    fn removing_an_attractor_leaves_a_game(g in arb_game(8), a in any::<u64>(), p in arb_player()) {
        let full = g.full();
        let atr = full.attractor(&subset(g.len(), a), p).unwrap();
        let rest = full.remove(&atr).unwrap();
        prop_assert!(rest.alive().iter().all(|v| rest.moves(v).next().is_some()));
    }

    #[test]
    fn predecessor_matches_definition(g in arb_game(8), a in any::<u64>(), p in arb_player()) {
        let full = g.full();
        let target = subset(g.len(), a);
        let got = full.predecessor(&target, p).unwrap();
        for v in 0..g.len() {
            let succ = g.successors(v);
            let want = if g.owner(v) == p {
                succ.iter().any(|&u| target.contains(u))
            } else {
                succ.iter().all(|&u| target.contains(u))
            };
            prop_assert_eq!(got.contains(v), want, "position {}", v);
        }
    }

    #[test]
    fn every_variant_partitions_and_matches_oracle(g in arb_game(8)) {
        let want = oracle_solve(&g.full()).unwrap();
        for v in Variant::ALL {
            let (got, _) = solve(&g.full(), &v.config()).unwrap();
            prop_assert!(got.partitions(&g.positions()));
            prop_assert_eq!(&got, &want, "variant {}", v);
        }
    }

    #[test]
    fn scc_wise_solving_agrees(g in arb_game(12)) {
        let cfg = SolverConfig::plain();
        prop_assert_eq!(solve_scc_wise(&g.full(), &cfg).unwrap().0, solve(&g.full(), &cfg).unwrap().0);
    }

    #[test]
    fn winning_regions_are_dominions(g in arb_game(12)) {
        let full = g.full();
        let (r, _) = solve(&full, &SolverConfig::plain()).unwrap();
        for p in Player::BOTH {
            let won = r.won_by(p);
            if !won.is_empty() {
                prop_assert!(full.is_dominion(won, p).unwrap());
            }
        }
    }

    #[test]
    fn memoization_changes_calls_not_subgames(g in arb_game(12)) {
        let (_, plain) = solve(&g.full(), &Variant::Plain.config()).unwrap();
        let (_, memo) = solve(&g.full(), &Variant::Memo.config()).unwrap();
        prop_assert_eq!(plain.distinct_subgames, memo.distinct_subgames);
        prop_assert!(memo.total_calls <= plain.total_calls);
    }

    #[test]
    fn pgsolver_round_trip(g in arb_game(12)) {
        let text = write_pgsolver(&g);
        let back = parse_pgsolver(&text).unwrap().game;
        prop_assert_eq!(write_pgsolver(&back), text);
        prop_assert_eq!(back, g);
    }
}
