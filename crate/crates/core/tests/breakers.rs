mod common;

use common::{family, random_sets};
use msgame::baseline::RandomPlayer;
use msgame::breaker::forest::{group_edges_within, maker_acyclic_in_groups};
use msgame::breaker::*;
use msgame::graph::{edge_endpoints, edge_id, initial_forest_partition, is_forest, SimpleGraph};
use msgame::maker::{biased_discrepancy_config, PotentialMaker, SetSource};
use msgame::solver::{explore_replies, Branching};
use msgame::Strategy;
use msgame::*;
use proptest::prelude::*;
use rand::Rng;

fn after_maker(size: usize, b: usize, e: Element) -> GameState {
    GameState::new(Board::abstract_board(size), b, 1)
        .unwrap()
        .apply_move(Move::maker(e))
        .unwrap()
}

#[test]
fn beck_examples() {
    let st = after_maker(4, 1, 0);
    let mut beck = BeckState::new(vec![vec![0, 1], vec![2, 3]], 4, 1).unwrap();
    beck.maker_claim(0);
    assert_eq!(beck_breaker_move(&mut beck, &st).unwrap(), vec![1]);

    let st = after_maker(3, 1, 0);
    let mut beck = BeckState::new(vec![vec![0, 1], vec![0, 2]], 3, 1).unwrap();
    beck.maker_claim(0);
    assert_eq!(beck_breaker_move(&mut beck, &st).unwrap(), vec![1]);
    assert_eq!(beck.alive_count(), 1);

    // Inside one reply the weights are updated between picks.
    let st = after_maker(6, 2, 0);
    let mut beck = BeckState::new(vec![vec![0, 1, 2], vec![3, 4], vec![0, 5]], 6, 2).unwrap();
    beck.maker_claim(0);
    let picks = beck_breaker_move(&mut beck, &st).unwrap();
    assert_eq!(picks, vec![5, 1]);
    assert!(
        (BeckState::completion_bound(&[vec![0, 1, 2], vec![3, 4]], 2) - (1.0 / 9.0 + 1.0 / 3.0))
            .abs()
            < 1e-15
    );
}

fn completed(sets: &[Vec<Element>], st: &GameState) -> usize {
    let m = st.maker_set();
    sets.iter()
        .filter(|s| s.iter().all(|&e| m.contains(e)))
        .count()
}

#[test]
fn beck_bound_against_every_maker_on_small_boards() {
    for (ground, b, seeds) in [(10, 1, 0..6u64), (12, 1, 6..9), (10, 2, 9..15)] {
        for seed in seeds {
            let sets = random_sets(seed, ground, 3 + seed as usize % 4, 2..=4);
            let bound = BeckState::completion_bound(&sets, b);
            let board = Board::abstract_board(ground);
            let obj = Objective::explicit(family(sets.clone()));
            let view = StageView {
                board: &board,
                objective: &obj,
                bias: b,
                stage: 1,
                variant: Variant::Standard,
            };
            let mut check = |st: &GameState| Ok(completed(&sets, st) as f64 <= bound + 1e-12);
            let rep = explore_replies(&view, BeckBreaker::new(), Branching::AllUpToB, &mut check)
                .unwrap();
            assert!(rep.all_passed(), "seed {seed}: {:?}", rep.first_failure);
        }
    }
}

#[test]
fn beck_bound_against_potential_and_random_makers() {
    for seed in 0..200u64 {
        let b = 1 + seed as usize % 3;
        let ground = 30;
        let sets = random_sets(seed, ground, 12, 2..=6);
        let bound = BeckState::completion_bound(&sets, b);
        let board = Board::abstract_board(ground);
        let obj = Objective::explicit(family(sets.clone()));
        let pc = biased_discrepancy_config(0.5, b).unwrap().potential();
        let makers: Vec<Box<dyn Strategy>> = vec![
            Box::new(RandomPlayer::maker(seed)),
            Box::new(PotentialMaker::new(pc, SetSource::StageFamily)),
        ];
        for mut mk in makers {
            let mut br = BeckBreaker::new();
            let StageOutcome::Finished(t, _) =
                play_stage(&board, &obj, b, 1, Variant::Standard, &mut mk, &mut br).unwrap()
            else {
                panic!("forfeit")
            };
            let st = t
                .moves
                .iter()
                .fold(GameState::new(board.clone(), b, 1).unwrap(), |s, m| {
                    s.apply_move(m.clone()).unwrap()
                });
            assert!(
                completed(&sets, &st) as f64 <= bound,
                "seed {seed} {}",
                mk.name()
            );
        }
    }
}

#[test]
fn beck_plays_copy_games_from_the_enumerated_copies() {
    let k3 = SimpleGraph::complete(3).unwrap();
    let board = complete_graph_board(5).unwrap();
    let obj = Objective::graph(5, GraphProperty::ContainsCopy { pattern: k3 });
    let view = StageView {
        board: &board,
        objective: &obj,
        bias: 1,
        stage: 1,
        variant: Variant::Standard,
    };
    let mut br = BeckBreaker::new();
    br.start_stage(&view).unwrap();
    let st = br.state().unwrap();
    assert_eq!(st.alive_count(), 10);
    let s0 = GameState::new(board.clone(), 1, 1)
        .unwrap()
        .apply_move(Move::maker(0))
        .unwrap();
    br.observe(&s0, &Move::maker(0)).unwrap();
    let pick = br.choose(&s0).unwrap();
    let (a, b) = edge_endpoints(5, 0);
    let (u, v) = edge_endpoints(5, pick[0]);
    assert!(
        [a, b].contains(&u) || [a, b].contains(&v),
        "pick {pick:?} shares no triangle with edge 0"
    );
}

#[test]
fn forest_breaker_keeps_maker_acyclic_in_every_line() {
    for (n, b) in [(4, 1), (5, 1), (5, 2)] {
        let board = complete_graph_board(n).unwrap();
        let obj = Objective::graph(n, GraphProperty::NonColorable { k: 2 });
        let groups = group_forests(initial_forest_partition(n).unwrap(), b + 1);
        let view = StageView {
            board: &board,
            objective: &obj,
            bias: b,
            stage: 1,
            variant: Variant::Standard,
        };
        let mut check = |st: &GameState| Ok(maker_acyclic_in_groups(n, &groups, st));
        let rep = explore_replies(
            &view,
            ForestBreaker::new(n),
            Branching::AllUpToB,
            &mut check,
        )
        .unwrap();
        assert!(rep.all_passed(), "n={n} b={b}: {:?}", rep.first_failure);
    }
}

#[test]
fn forest_breaker_on_a_four_cycle() {
    // Cycle 0-1-2-3-0 on K_4; first-fit splits it into the path 01,03,12 and 23.
    let n = 4;
    let cycle = [
        edge_id(n, 0, 1),
        edge_id(n, 1, 2),
        edge_id(n, 2, 3),
        edge_id(n, 0, 3),
    ];
    let mut keep = fixedbitset::FixedBitSet::with_capacity(6);
    cycle.iter().for_each(|&e| keep.insert(e));
    let board = complete_graph_board(n).unwrap().restrict(&keep);
    let forests = greedy_forests(&board);
    assert_eq!(forests, vec![vec![0, 2, 3], vec![5]]);
    let obj = Objective::graph(n, GraphProperty::NonColorable { k: 2 });
    let view = StageView {
        board: &board,
        objective: &obj,
        bias: 1,
        stage: 1,
        variant: Variant::Standard,
    };
    let mut lines = Vec::new();
    let mut check = |st: &GameState| {
        lines.push(st.history().to_vec());
        Ok(is_forest(
            n,
            st.maker_set().ones().map(|e| edge_endpoints(n, e)),
        ))
    };
    let rep = explore_replies(
        &view,
        ForestBreaker::new(n),
        Branching::AllUpToB,
        &mut check,
    )
    .unwrap();
    assert!(rep.all_passed());
    // Maker's 01 leaves 2 and 3 in separate classes of the other forest, so no path
    // edge is forced and Breaker takes the lowest free edge of the group.
    let first = lines.iter().find(|l| l[0] == Move::maker(0)).unwrap();
    assert_eq!(first[1], Move::breaker(vec![2]));
    // Maker's 23 joins the classes of 2 and 3, which the path 2-1-0-3 also joins; its
    // lowest edge is 01.
    let first = lines.iter().find(|l| l[0] == Move::maker(5)).unwrap();
    assert_eq!(first[1], Move::breaker(vec![0]));
}

#[test]
fn forest_counts_shrink_by_the_group_size() {
    for b in 1..=3 {
        for n in [6, 9, 12, 16] {
            let setup = GameSetup::new(
                complete_graph_board(n).unwrap(),
                Objective::graph(n, GraphProperty::NonColorable { k: 2 }),
                b,
            );
            let mut br = ForestBreaker::new(n);
            let t = play_multistage(
                &setup,
                &mut RandomPlayer::maker(n as u64 * 7 + b as u64),
                &mut br,
                None,
            )
            .unwrap();
            assert!(t.forfeit.is_none(), "{:?}", t.forfeit);
            let recs = br.records();
            assert_eq!(recs[0].forests, n.div_ceil(2));
            for w in recs.windows(2) {
                assert!(w[1].forests <= w[0].forests.div_ceil(b + 1));
                assert!(w[1].groups <= w[1].forests.div_ceil(b + 1));
            }
            assert!(recs
                .iter()
                .all(|r| r.max_forced <= b && r.invariant_checks > 0));
        }
    }
}

#[test]
fn arboricity_spot_check() {
    let mut rng = msgame::sweep::rng_from_seed(17);
    for n in [6usize, 9, 12, 16] {
        for b in 1..=3 {
            for group in group_forests(initial_forest_partition(n).unwrap(), b + 1) {
                for _ in 0..300 {
                    let mask: u64 = rng.random::<u64>() & ((1 << n) - 1);
                    let s = mask.count_ones() as usize;
                    if s == 0 {
                        continue;
                    }
                    assert!(group_edges_within(n, &group, mask) <= group.len() * (s - 1));
                    assert!(group.len() <= b + 1);
                }
            }
        }
    }
}

#[test]
fn hgame_phase2_on_planted_collections() {
    let n = 7;
    let k3 = SimpleGraph::complete(3).unwrap();
    let cfg = HGameConfig {
        phase1_stages: Some(0),
        ..Default::default()
    };
    let plants: Vec<Vec<(usize, usize)>> = vec![
        SimpleGraph::complete(5).unwrap().edges(),
        SimpleGraph::complete(4).unwrap().edges(),
        vec![
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (1, 3),
            (3, 4),
            (2, 4),
            (4, 5),
            (3, 5),
            (5, 6),
            (4, 6),
        ],
    ];
    for plant in plants {
        let m = plant.len();
        let mut keep = fixedbitset::FixedBitSet::with_capacity(n * (n - 1) / 2);
        plant
            .iter()
            .for_each(|&(u, v)| keep.insert(edge_id(n, u, v)));
        let board = complete_graph_board(n).unwrap().restrict(&keep);
        let obj = Objective::graph(
            n,
            GraphProperty::ContainsCopy {
                pattern: k3.clone(),
            },
        );
        for b in 1..=2 {
            let bound = ((m as f64).ln() / ((b + 1) as f64).ln()).ceil() as usize + 1;
            for seed in 0..30 {
                let setup = GameSetup::new(board.clone(), obj.clone(), b);
                let mut br = HGameBreaker::new(n, &k3, b, &cfg).unwrap();
                let t =
                    play_multistage(&setup, &mut RandomPlayer::maker(seed), &mut br, None).unwrap();
                assert!(t.forfeit.is_none());
                assert!(
                    t.tau_observed <= bound,
                    "m={m} b={b}: tau {} > {bound}",
                    t.tau_observed
                );
                assert_eq!(br.report().phase2_from_stage, Some(1));
            }
        }
    }
}

#[test]
fn hgame_phase1_leaves_no_large_collection() {
    let k3 = SimpleGraph::complete(3).unwrap();
    for n in [6, 7] {
        let setup = GameSetup::new(
            complete_graph_board(n).unwrap(),
            Objective::graph(
                n,
                GraphProperty::ContainsCopy {
                    pattern: k3.clone(),
                },
            ),
            1,
        );
        for seed in 0..5 {
            let mut br = HGameBreaker::new(n, &k3, 1, &HGameConfig::default()).unwrap();
            assert_eq!((br.report().t, br.report().derived), (2, false));
            assert!((br.report().delta - 0.75).abs() < 1e-12);
            play_multistage(&setup, &mut RandomPlayer::maker(seed), &mut br, None).unwrap();
            let largest = br.report().largest_collection_after_phase1.unwrap();
            assert!(largest < 2 * 3, "n={n} seed={seed}: {largest}");
        }
    }
}

#[test]
fn random_breaker_basics() {
    let st = after_maker(10, 3, 0);
    let a = random_breaker(9).choose(&st).unwrap();
    assert_eq!(a, random_breaker(9).choose(&st).unwrap());
    assert_eq!(a.len(), 3);
    let mut sorted = a.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), 3);
    assert!(a.iter().all(|&e| st.is_free(e)));

    let st = GameState::new(Board::abstract_board(3), 5, 1)
        .unwrap()
        .apply_move(Move::maker(1))
        .unwrap();
    assert_eq!(random_breaker(1).choose(&st).unwrap().len(), 2);
}

#[test]
fn random_breaker_is_uniform() {
    let st = after_maker(11, 1, 0);
    let mut p = random_breaker(2024);
    let draws = 100_000;
    let mut counts = [0usize; 11];
    for _ in 0..draws {
        counts[p.choose(&st).unwrap()[0]] += 1;
    }
    assert_eq!(counts[0], 0);
    let expected = draws as f64 / 10.0;
    let chi2: f64 = counts[1..]
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 9 degrees of freedom; 27.88 is the 0.999 quantile.
    assert!(chi2 < 27.88, "chi2={chi2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beck_weights_match_scratch(seed in any::<u64>(), ground in 4usize..24, b in 1usize..4) {
        let sets = random_sets(seed, ground, 8, 1..=5);
        let board = Board::abstract_board(ground);
        let obj = Objective::explicit(family(sets.clone()));
        let mut mk = RandomPlayer::maker(seed);
        let mut br = BeckBreaker::new();
        let StageOutcome::Finished(t, _) = play_stage(&board, &obj, b, 1, Variant::Standard, &mut mk, &mut br).unwrap() else {
            return Err(TestCaseError::fail("forfeit"));
        };
        let st = t.moves.iter().fold(GameState::new(board.clone(), b, 1).unwrap(), |s, m| s.apply_move(m.clone()).unwrap());
        let beck = br.state().unwrap();
        let scratch = beck.scratch_weights(&st);
        for (w, s) in beck.weights().iter().zip(&scratch) {
            prop_assert!((w - s).abs() <= 1e-12 * s.abs().max(1e-300));
        }
        prop_assert!(completed(&sets, &st) as f64 <= BeckState::completion_bound(&sets, b));
    }
}
