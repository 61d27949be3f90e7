mod common;

use common::{game, names, outcome_names, restrictions};
use forwind::solvers::*;

#[test]
fn bribe_rationalizability_rounds() {
    let g = game("bribe.game");
    let t = rationalizability(&g).unwrap();
    for (n, r) in t.rounds.iter().enumerate() {
        println!("round {n}: {:?}", names(&g, r));
    }
    assert_eq!(t.fixed_point, 3);
    assert_eq!(names(&g, t.round(1)), vec![vec!["N.P", "N.I", "B.I"], vec!["R", "A"]]);
    assert_eq!(names(&g, t.round(2)), vec![vec!["N.P", "N.I", "B.I"], vec!["A"]]);
    assert_eq!(names(&g, t.round(3)), vec![vec!["B.I"], vec!["A"]]);
    assert_eq!(outcome_names(&g, &t.outcomes), vec!["zBAI"]);
}

#[test]
fn bribe_selective_is_empty_after_round_one() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict");
    let t = selective_rationalizability(&g, &d.as_dyn()).unwrap();
    println!("{:?}", t.eliminations);
    assert!(t.is_empty());
    assert_eq!(names(&g, t.round(1)), vec![Vec::<String>::new(), vec!["A".to_string()]]);
}

#[test]
fn bribe_strong_delta_plays_n() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict");
    let t = strong_delta_rationalizability(&g, &d.as_dyn()).unwrap();
    assert_eq!(names(&g, t.final_set()), vec![vec!["N.P", "N.I"], vec!["R", "A"]]);
    assert_eq!(outcome_names(&g, &t.outcomes), vec!["zN"]);
}

#[test]
fn cleo_fixtures() {
    let g = game("cleo.game");
    let t = rationalizability(&g).unwrap();
    assert_eq!(t.fixed_point, 0);
    assert_eq!(t.final_set(), &forwind::game::ProfileSet::full(&g));
    for f in ["cleo_nw.restrict", "cleo_se_path.restrict", "cleo_se_full.restrict"] {
        let d = restrictions(&g, f);
        let s = selective_rationalizability(&g, &d.as_dyn()).unwrap();
        println!("{f}: {:?} {:?} exact={}", names(&g, s.final_set()), outcome_names(&g, &s.outcomes), s.exact);
    }
}

#[test]
fn binding_mandate_is_named() {
    let g = game("bribe.game");
    let t = rationalizability(&g).unwrap();
    let np = g.strategy_index(0, "N.P").unwrap();
    let e = t.eliminations.iter().find(|e| e.player == 0 && e.strategy == np).unwrap();
    assert_eq!(e.round, 3);
    assert_eq!(e.reason, EliminationReason::NoAdmissibleBelief { binding: Some("round 2(Bob)".into()) });
}

#[test]
fn empty_polytope_empties_the_player() {
    let g = game("bribe.game");
    let text = "[restrictions]\nAnn @ a1 : P(Bob = R) >= 2/3\nAnn @ a1 : P(Bob = A) >= 2/3\n";
    let d = forwind::dsl::parse_restrictions(text, &g).unwrap();
    let t = strong_delta_rationalizability(&g, &d.as_dyn()).unwrap();
    assert!(t.round(1).members(0).is_empty());
    assert!(t.eliminations.iter().any(|e| e.player == 0 && e.reason == EliminationReason::EmptyPolytope));
}

#[test]
fn single_player_game_is_backward_induction() {
    let g = forwind::dsl::parse_game(
        "[players]\nSolo\n[infosets]\nh Solo : a b\ng Solo : c d\n[nodes]\nroot h : a -> x, b -> zb\nx g : c -> zc, d -> zd\n[terminals]\nzb : 1\nzc : 2\nzd : 0\n",
    )
    .unwrap();
    let t = rationalizability(&g).unwrap();
    assert_eq!(names(&g, t.final_set()), vec![vec!["a.c"]]);
}

#[test]
fn unrestricted_concepts_collapse() {
    let g = game("bribe.game");
    let none = forwind::belief::RestrictionProfile::unrestricted(&g).as_dyn();
    let rat = rationalizability(&g).unwrap();
    let sel = selective_rationalizability(&g, &none).unwrap();
    assert_eq!(sel.final_set(), rat.final_set());
    let strong = strong_delta_rationalizability(&g, &none).unwrap();
    assert_eq!(strong.outcomes, rat.outcomes);
}

#[test]
fn generalized_reproduces_selective() {
    let g = game("cleo.game");
    let d = restrictions(&g, "cleo_nw.restrict").as_dyn();
    let sel = selective_rationalizability(&g, &d).unwrap();
    let gen = generalized(&g, &d, StartSet::Rationalizable, true).unwrap();
    assert_eq!(gen.rounds, sel.rounds);
}

#[test]
fn comparisons() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict").as_dyn();
    let sel = selective_rationalizability(&g, &d).unwrap();
    let strong = strong_delta_rationalizability(&g, &d).unwrap();
    let c = compare(&g, &sel, &strong);
    assert_eq!((c.solutions, c.outcomes), (Inclusion::Disjoint, Inclusion::Disjoint));

    let none = forwind::belief::RestrictionProfile::unrestricted(&g).as_dyn();
    let c = compare(&g, &selective_rationalizability(&g, &none).unwrap(), &rationalizability(&g).unwrap());
    assert_eq!(c.solutions, Inclusion::Equal);

    let cleo = game("cleo.game");
    let d = restrictions(&cleo, "cleo_nw.restrict").as_dyn();
    let c = compare(&cleo, &selective_rationalizability(&cleo, &d).unwrap(), &rationalizability(&cleo).unwrap());
    assert_eq!((c.solutions, c.outcomes), (Inclusion::FirstInSecond, Inclusion::FirstInSecond));
    assert!(!c.identical_rounds());
}

#[test]
fn rationalized_cleo_restrictions_keep_the_outcome() {
    let g = game("cleo.game");
    let d = restrictions(&g, "cleo_nw.restrict").as_dyn();
    let star = rationalize_restrictions(&g, &d).unwrap();
    let t = selective_rationalizability(&g, &star.restrictions()).unwrap();
    assert_eq!(outcome_names(&g, &t.outcomes), vec!["zONW"]);
    // Every witness of the original run lies in the rationalized set.
    let sel = selective_rationalizability(&g, &d).unwrap();
    for w in &sel.witnesses {
        let view = forwind::belief::PlayerView::new(&g, w.player);
        assert!(star.players[w.player].contains(&g, &view, &w.cps).unwrap());
    }
}

#[test]
fn rationalizing_needs_a_nonempty_solution() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict").as_dyn();
    assert!(matches!(rationalize_restrictions(&g, &d), Err(forwind::Error::PreconditionViolated(_))));
}

#[test]
fn dropping_s3_needs_rationalizable_restrictions() {
    let g = forwind::dsl::parse_game(
        "[players]\nAnn\nBob\n[infosets]\na1 Ann : O I\nb Bob : l r\na2 Ann : x y\n[nodes]\n\
         root a1 : O -> zO, I -> xb\nxb b : l -> xa, r -> zr\nxa a2 : x -> zx, y -> zy\n\
         [terminals]\nzO : 5, 0\nzr : 0, 1\nzx : 1, 2\nzy : 0, 0\n",
    )
    .unwrap();
    let d = forwind::dsl::parse_restrictions("[restrictions]\nBob @ b : P(Ann@a2 = y) = 1\n", &g).unwrap();
    let rat = rationalizability(&g).unwrap();
    assert!(!is_rationalizable_restriction(&g, &d.players[1], rat.final_set()));
    assert!(is_rationalizable_restriction(&g, &d.players[0], rat.final_set()));
    assert!(matches!(solve_without_s3(&g, &d.as_dyn()), Err(forwind::Error::PreconditionViolated(_))));
    // Selective rationalizability itself accepts any restriction.
    assert!(selective_rationalizability(&g, &d.as_dyn()).is_ok());
}

#[test]
fn composition_holds_on_fixtures() {
    for (g, f) in [("bribe.game", "bribe_ann_r.restrict"), ("cleo.game", "cleo_nw.restrict"), ("cleo.game", "cleo_se_path.restrict")] {
        let g = game(g);
        let d = restrictions(&g, f).as_dyn();
        let rat = rationalizability(&g).unwrap();
        let sel = selective_rationalizability(&g, &d).unwrap();
        assert!(verify_composition(&g, &sel, rat.final_set()).holds(), "{f}");
    }
}

mod properties {
    use super::common::random::{random_game, random_point_restrictions};
    use forwind::solvers::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn case(seed: u64) -> Option<(forwind::Game, forwind::belief::RestrictionProfile)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = (0..20).find_map(|k| random_game(&mut rng, k))?;
        let rat = rationalizability(&g).ok()?;
        let (d, _) = random_point_restrictions(&mut rng, &g, rat.final_set())?;
        Some((g, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rounds_shrink_even_when_everything_is_reevaluated(seed in any::<u64>()) {
            let Some((g, d)) = case(seed) else { return Ok(()) };
            for procedure in [Procedure::Rationalizability, Procedure::Selective, Procedure::StrongDelta] {
                let mut spec = procedure.spec(&g, &d.as_dyn()).unwrap();
                spec.reevaluate_all = true;
                let t = generalized_solve(&g, &spec).unwrap();
                prop_assert!(t.rounds.windows(2).all(|w| w[1].is_subset_of(&w[0])));
                prop_assert_eq!(&t.rounds, &procedure.run(&g, &d.as_dyn()).unwrap().rounds);
            }
        }

        #[test]
        fn selective_refines_rationalizability(seed in any::<u64>()) {
            let Some((g, d)) = case(seed) else { return Ok(()) };
            let rat = rationalizability(&g).unwrap();
            let sel = selective_rationalizability(&g, &d.as_dyn()).unwrap();
            prop_assert!(sel.final_set().is_subset_of(rat.final_set()));
            prop_assert!(sel.outcomes.iter().all(|z| rat.outcomes.contains(z)));
        }

        #[test]
        fn unrestricted_selective_is_rationalizability(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let Some((g, _)) = (0..20).find_map(|k| random_game(&mut rng, k)) else { return Ok(()) };
            let none = forwind::belief::RestrictionProfile::unrestricted(&g).as_dyn();
            let rat = rationalizability(&g).unwrap();
            let sel = selective_rationalizability(&g, &none).unwrap();
            prop_assert_eq!(sel.final_set(), rat.final_set());
            prop_assert!(rat.fixed_point <= 1 + (0..g.num_players()).map(|i| g.num_strategies(i)).sum::<usize>());
        }
    }
}
