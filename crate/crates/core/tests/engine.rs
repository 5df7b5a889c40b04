mod common;

use common::{family, random_sets};
use fixedbitset::FixedBitSet;
use msgame::baseline::{FirstFree, RandomPlayer};
use msgame::breaker::GreedyBreaker;
use msgame::engine::StageEnd;
use msgame::maker::{hamilton_families, LehmanMaker};
use msgame::Strategy;
use msgame::*;
use proptest::prelude::*;

fn stage(
    board: &Board,
    obj: &Objective,
    b: usize,
    variant: Variant,
    seed: u64,
) -> (GameState, StageOutcome) {
    let mut mk = RandomPlayer::maker(seed);
    let mut br = RandomPlayer::breaker(seed ^ 1);
    let out = play_stage(board, obj, b, 1, variant, &mut mk, &mut br).unwrap();
    let trace = match &out {
        StageOutcome::Finished(t, _) | StageOutcome::Forfeited(t, _) => t,
    };
    let mut st = GameState::new(board.clone(), b, 1).unwrap();
    for mv in &trace.moves {
        st.apply_move_mut(mv.clone()).unwrap();
    }
    (st, out)
}

#[test]
fn complete_boards() {
    assert_eq!(complete_graph_board(2).unwrap().label(0), Some((0, 1)));
    assert_eq!(complete_graph_board(4).unwrap().len(), 6);
    assert_eq!(complete_graph_board(16).unwrap().len(), 16 * 15 / 2);
    assert!(complete_graph_board(1).is_err());
}

#[test]
fn moves() {
    let st = GameState::new(Board::abstract_board(4), 2, 1).unwrap();
    let st = st.apply_move(Move::maker(0)).unwrap();
    assert_eq!(st.owner(0), Some(Owner::Maker));
    let st = st.apply_move(Move::breaker(vec![1, 2])).unwrap();
    assert_eq!(st.owner(1), Some(Owner::Breaker));
    assert_eq!(st.owner(2), Some(Owner::Breaker));
    assert!(matches!(
        st.apply_move(Move::maker(1)),
        Err(Error::IllegalMove { .. })
    ));
    assert!(matches!(
        st.apply_move(Move {
            player: Player::Maker,
            elements: vec![3, 3]
        }),
        Err(Error::IllegalMove { .. })
    ));
    let st = GameState::new(Board::abstract_board(4), 1, 1).unwrap();
    assert!(st
        .apply_move(Move {
            player: Player::Maker,
            elements: vec![0, 1]
        })
        .is_err());
    assert!(st.apply_move(Move::breaker(vec![0, 1])).is_err());
    assert!(st.apply_move(Move::breaker(vec![])).is_err());
}

#[test]
fn reductions() {
    let board = Board::abstract_board(4);
    let obj = Objective::explicit(family(vec![vec![0, 1], vec![1, 3]]));
    let st = [
        Move::maker(0),
        Move::breaker(vec![3]),
        Move::maker(1),
        Move::breaker(vec![2]),
    ]
    .into_iter()
    .fold(GameState::new(board.clone(), 1, 1).unwrap(), |s, m| {
        s.apply_move(m).unwrap()
    });
    let r = reduce_stage(&st, &obj, Variant::Standard).unwrap();
    assert_eq!(
        r.next_family().unwrap().sets().collect::<Vec<_>>(),
        vec![&[0, 1][..]]
    );
    assert_eq!(r.next_board.elements(), &[0, 1]);

    let none = [
        Move::maker(3),
        Move::breaker(vec![0]),
        Move::maker(2),
        Move::breaker(vec![1]),
    ]
    .into_iter()
    .fold(GameState::new(board.clone(), 1, 1).unwrap(), |s, m| {
        s.apply_move(m).unwrap()
    });
    assert!(!reduce_stage(&none, &obj, Variant::Standard)
        .unwrap()
        .is_alive());

    let mid = GameState::new(board, 1, 1)
        .unwrap()
        .apply_move(Move::maker(0))
        .unwrap();
    assert!(matches!(
        reduce_stage(&mid, &obj, Variant::Standard),
        Err(Error::InvalidState(_))
    ));

    let board = Board::abstract_board(3);
    let obj = Objective::explicit(family(vec![vec![0, 2], vec![0, 1]]));
    let st = GameState::new(board, 1, 1)
        .unwrap()
        .apply_move(Move::maker(0))
        .unwrap()
        .apply_move(Move::breaker(vec![1]))
        .unwrap();
    // Maker owns no winning set yet, so the stop stage cannot end here.
    assert!(reduce_stage(&st, &obj, Variant::Stop).is_err());
    let won = st.apply_move(Move::maker(2)).unwrap();
    let r = reduce_stage(&won, &obj, Variant::Stop).unwrap();
    assert_eq!(r.next_board.elements(), &[0, 2]);
    assert_eq!(r.next_family().unwrap().set_count(), 1);

    let obj = Objective::explicit(family(vec![vec![0, 2], vec![0, 1]]));
    let st = GameState::new(Board::abstract_board(3), 1, 1)
        .unwrap()
        .apply_move(Move::maker(0))
        .unwrap()
        .apply_move(Move::breaker(vec![1]))
        .unwrap();
    let mut keep = st.maker_set();
    keep.union_with(&st.owned_by(Owner::Free));
    let (next, _) = obj.restrict(&keep).unwrap();
    assert_eq!(
        next.family().unwrap().sets().collect::<Vec<_>>(),
        vec![&[0, 2][..]]
    );
}

#[test]
fn stats() {
    let f = family(vec![vec![0, 1], vec![2, 3, 4]]);
    assert_eq!(
        family_stats(&f).unwrap(),
        vec![GroupStats { k: 2, count: 2 }]
    );
    let col = msgame::maker::coloring_family(8, 2, 1000).unwrap();
    assert_eq!(
        family_stats(&col).unwrap(),
        vec![GroupStats { k: 6, count: 70 }]
    );
    // Group 1 alone: one vertex against 14 (C(16,1) * C(15,14) = 240 sets).
    let shapes = msgame::maker::hamilton_shapes(16, 0.5).unwrap();
    assert_eq!((shapes[0].a, shapes[0].b), (1, 14));
    assert_eq!(shapes[0].set_size(), 14);
    let f = Family::new(vec![msgame::maker::families::cross_group(
        16, shapes[0], "F1",
    )])
    .unwrap();
    assert_eq!(
        family_stats(&f).unwrap(),
        vec![GroupStats { k: 14, count: 240 }]
    );
    assert!(family_stats(
        &Family::new(vec![Group {
            name: "E".into(),
            sets: vec![]
        }])
        .unwrap()
    )
    .is_err());
    assert!(matches!(
        hamilton_families(16, 0.5, 1000),
        Err(Error::FamilyTooLarge { .. })
    ));
}

#[test]
fn stage_examples() {
    let board = Board::abstract_board(2);
    let obj = Objective::explicit(family(vec![vec![0]]));
    let mut mk = FirstFree::new(Player::Maker);
    let mut br = FirstFree::new(Player::Breaker);
    let StageOutcome::Finished(t, r) =
        play_stage(&board, &obj, 1, 1, Variant::Standard, &mut mk, &mut br).unwrap()
    else {
        panic!("forfeit")
    };
    assert_eq!(t.moves, vec![Move::maker(0), Move::breaker(vec![1])]);
    assert_eq!(r.next_family().unwrap().set_count(), 1);

    let StageOutcome::Finished(t, r) = play_stage(
        &Board::abstract_board(4),
        &obj,
        1,
        1,
        Variant::Stop,
        &mut mk,
        &mut br,
    )
    .unwrap() else {
        panic!("forfeit")
    };
    assert_eq!(t.moves, vec![Move::maker(0)]);
    assert_eq!(t.ended_by, StageEnd::MakerWon);
    assert_eq!(r.next_board.elements(), &[0, 1, 2, 3]);

    let (st, _) = stage(
        &Board::abstract_board(6),
        &Objective::explicit(family(vec![vec![0]])),
        1,
        Variant::Standard,
        3,
    );
    assert_eq!(st.maker_set().count_ones(..), 3);
}

#[test]
fn forfeits_are_recorded() {
    struct Cheat;
    impl Strategy for Cheat {
        fn name(&self) -> String {
            "cheat".into()
        }
        fn role(&self) -> Player {
            Player::Breaker
        }
        fn start_stage(&mut self, _: &StageView<'_>) -> Result<()> {
            Ok(())
        }
        fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
            Ok(state.owned_by(Owner::Maker).ones().take(1).collect())
        }
    }
    let setup = GameSetup::new(
        Board::abstract_board(4),
        Objective::explicit(family(vec![vec![0, 1]])),
        1,
    );
    let t = play_multistage(&setup, &mut FirstFree::new(Player::Maker), &mut Cheat, None).unwrap();
    let f = t.forfeit.unwrap();
    assert_eq!(f.player, Player::Breaker);
    assert!(!f.invariant_violation);
}

#[test]
fn multistage_examples() {
    let setup = GameSetup::new(
        Board::abstract_board(5),
        Objective::explicit(family(vec![])),
        1,
    );
    let t = play_multistage(
        &setup,
        &mut RandomPlayer::maker(1),
        &mut RandomPlayer::breaker(2),
        Some(1),
    )
    .unwrap();
    assert_eq!(t.tau_observed, 0);

    let setup = GameSetup::new(
        complete_graph_board(16).unwrap(),
        Objective::graph(16, GraphProperty::Connected),
        1,
    );
    let t = play_multistage(
        &setup,
        &mut LehmanMaker::new(16),
        &mut GreedyBreaker::new(),
        None,
    )
    .unwrap();
    assert!(t.tau_observed >= 3);
    assert_eq!(replay(&t, &setup).unwrap().tau, t.tau_observed);

    // A singleton set survives forever; the cap truncates the game.
    let setup = GameSetup::new(
        Board::abstract_board(3),
        Objective::explicit(family(vec![vec![0]])),
        1,
    )
    .max_stages(5);
    let t = play_multistage(
        &setup,
        &mut FirstFree::new(Player::Maker),
        &mut FirstFree::new(Player::Breaker),
        None,
    )
    .unwrap();
    assert!(t.truncated);
    assert_eq!(t.tau_observed, 5);
}

#[test]
fn traces_round_trip_through_json_and_replay() {
    let sets = random_sets(11, 12, 6, 2..=4);
    let setup = GameSetup::new(
        Board::abstract_board(12),
        Objective::explicit(family(sets)),
        2,
    );
    let t = play_multistage(
        &setup,
        &mut RandomPlayer::maker(5),
        &mut RandomPlayer::breaker(6),
        Some(5),
    )
    .unwrap();
    let text = serde_json::to_string(&t).unwrap();
    let back: MatchTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, t);
    assert_eq!(replay(&back, &setup).unwrap().tau, t.tau_observed);

    let mut bad = t.clone();
    bad.tau_observed += 1;
    assert!(matches!(
        replay(&bad, &setup),
        Err(Error::InvariantViolation(_))
    ));
    if let Some(s) = bad.stages.first_mut() {
        s.moves.swap(0, 1);
    }
    bad.tau_observed = t.tau_observed;
    assert!(replay(&bad, &setup).is_err());
}

#[test]
fn io_round_trip() {
    let board = complete_graph_board(5).unwrap();
    let f = msgame::maker::coloring_family(5, 2, 100).unwrap();
    let text = msgame::io::family_to_json(&board, &f).unwrap();
    let (b2, obj) = msgame::io::family_from_json(&text).unwrap();
    assert_eq!(b2, board);
    assert_eq!(obj.family(), Some(&f));
}

fn maker_set_oracle(state: &GameState) -> Vec<Element> {
    state
        .history()
        .iter()
        .filter(|m| m.player == Player::Maker)
        .flat_map(|m| m.elements.clone())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn stage_invariants(
        seed in any::<u64>(),
        size in 2usize..20,
        b in 1usize..4,
        count in 0usize..8,
        stop in any::<bool>(),
    ) {
        let sets = random_sets(seed, size, count, 1..=4);
        let obj = Objective::explicit(family(sets.clone()));
        let board = Board::abstract_board(size);
        let variant = if stop { Variant::Stop } else { Variant::Standard };
        let (st, out) = stage(&board, &obj, b, variant, seed);
        let StageOutcome::Finished(trace, r) = out else { return Err(TestCaseError::fail("forfeit")) };

        // Ownership is monotone: no element is claimed twice along the history.
        let mut seen = FixedBitSet::with_capacity(size);
        for mv in st.history() {
            for &e in &mv.elements {
                prop_assert!(!seen.put(e));
            }
            if mv.player == Player::Breaker {
                prop_assert!(!mv.elements.is_empty() && mv.elements.len() <= b);
            } else {
                prop_assert_eq!(mv.elements.len(), 1);
            }
        }
        let mut maker: Vec<Element> = maker_set_oracle(&st);
        maker.sort_unstable();
        prop_assert_eq!(st.maker_set().ones().collect::<Vec<_>>(), maker.clone());

        // The reduced family is exactly the sets inside the next board.
        let next: FixedBitSet = r.next_board.to_bitset();
        let want: Vec<&Vec<Element>> = sets.iter().filter(|s| s.iter().all(|&e| next.contains(e))).collect();
        let got: Vec<&[Element]> = r.next_family().unwrap().sets().collect();
        prop_assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            prop_assert_eq!(*g, &w[..]);
        }
        if variant == Variant::Standard {
            prop_assert_eq!(r.next_board.elements(), &maker[..]);
            // Random players claim maximally, so Maker ends with ceil(|X|/(b+1))
            // elements.
            prop_assert_eq!(maker.len(), size.div_ceil(b + 1));
            prop_assert_eq!(trace.ended_by, StageEnd::Exhausted);
        } else if trace.ended_by == StageEnd::MakerWon {
            prop_assert!(obj.is_won_by(&st.maker_set()).unwrap());
        }
    }

    #[test]
    fn tau_respects_the_edge_count_bound(
        seed in any::<u64>(),
        size in 4usize..40,
        b in 1usize..4,
        count in 1usize..6,
    ) {
        let sets = random_sets(seed, size, count, 1..=5);
        let k = sets.iter().map(Vec::len).min().unwrap();
        let setup = GameSetup::new(Board::abstract_board(size), Objective::explicit(family(sets)), b).max_stages(16);
        let t = play_multistage(&setup, &mut RandomPlayer::maker(seed), &mut RandomPlayer::breaker(!seed), Some(seed)).unwrap();
        prop_assert!(t.forfeit.is_none());
        prop_assert_eq!(replay(&t, &setup).unwrap().tau, t.tau_observed);
        if !t.truncated {
            // Under maximal play |X_i| = ceil(|X_{i-1}|/(b+1)), and a set of
            // size k survives stage i only while |X_i| >= k.
            let mut x = size;
            let mut bound = 0;
            while bound < 16 {
                x = x.div_ceil(b + 1);
                if x < k {
                    break;
                }
                bound += 1;
            }
            prop_assert!(t.tau_observed <= bound);
        }
        for w in t.stage_lengths().windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }
}
