mod common;

use common::{fixture, game, restrictions};
use forwind::dsl::{parse_game, parse_game_tree, parse_restrictions, serialize_game, serialize_solution, SCHEMA};
use forwind::num::{q, ratio};
use forwind::solvers::{rationalizability, selective_rationalizability, strong_delta_rationalizability};
use forwind::Error;
use serde_json::Value;

#[test]
fn empty_input_is_a_syntax_error() {
    assert!(matches!(parse_game(""), Err(Error::Syntax { .. })));
    assert!(matches!(parse_game("# only a comment\n"), Err(Error::Syntax { .. })));
}

#[test]
fn errors_carry_positions() {
    let text = "[players]\nA\n[infosets]\nh A : x y\n[nodes]\nroot h : x -> z1, y -> nowhere\n[terminals]\nz1 : 0\n";
    match parse_game(text) {
        Err(Error::UnknownIdentifier { pos, name }) => {
            assert_eq!(name, "nowhere");
            assert_eq!(pos.line, 6);
        }
        other => panic!("{other:?}"),
    }
    let text = "[players]\nA\nB\n[infosets]\nh A : x\n[nodes]\nroot h : x -> z\n[terminals]\nz : 1\n";
    assert!(matches!(parse_game(text), Err(Error::ArityMismatch { expected: 2, found: 1, .. })));
}

#[test]
fn decimal_payoffs_are_exact() {
    let g = game("cleo.game");
    let z = g.node_index("z1UL").unwrap();
    assert_eq!(g.payoffs(z), &[q(1), q(1), ratio(33, 10)]);
}

#[test]
fn fixtures_round_trip() {
    for f in ["bribe.game", "cleo.game"] {
        let tree = parse_game_tree(&fixture(f)).unwrap();
        let text = serialize_game(&tree);
        assert_eq!(parse_game_tree(&text).unwrap(), tree, "{f}");
        assert_eq!(serialize_game(&parse_game_tree(&text).unwrap()), text);
    }
}

#[test]
fn restriction_point_beliefs() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict");
    let clauses = d.clauses(0);
    assert_eq!(clauses.len(), 1);
    assert_eq!(g.infoset(clauses[0].infoset).name, "a1");
    assert!(d.clauses(1).is_empty());

    let c = game("cleo.game");
    let d = restrictions(&c, "cleo_se_full.restrict");
    assert_eq!(d.clauses(2).len(), 2);
}

#[test]
fn restriction_syntax_variants() {
    let g = game("bribe.game");
    for text in [
        "[restrictions]\nAnn @ a1 : P(Bob@b1 = R) >= 0.25\n",
        "[restrictions]\nAnn @ a1 : P(Bob in [R]) - P(Bob = A) <= 1/2\n",
        "[restrictions]\nAnn @ a1 : 2 P(Bob = R) = 1\n",
        "[restrictions]\nAnn @ a1 : P(reach(xB) and not Bob = A) <= 1\n",
        "[restrictions]\n# nothing\n",
    ] {
        parse_restrictions(text, &g).unwrap_or_else(|e| panic!("{text}: {e}"));
    }
}

#[test]
fn restriction_errors() {
    let g = game("bribe.game");
    let cases: [(&str, fn(&Error) -> bool); 5] = [
        ("Ann @ a1 : P(Bob = R) = 2", |e| matches!(e, Error::InfeasibleClause { .. })),
        ("Ann @ b1 : P(Bob = R) = 1", |e| matches!(e, Error::UnknownInfoset { .. })),
        ("Ann @ a1 : P(Carl = R) = 1", |e| matches!(e, Error::UnknownIdentifier { .. })),
        ("Ann @ a1 : P(Ann = N.P) = 1", |e| matches!(e, Error::Syntax { .. })),
        ("Ann @ a1 P(Bob = R) = 1", |e| matches!(e, Error::Syntax { .. })),
    ];
    for (line, check) in cases {
        let err = parse_restrictions(&format!("[restrictions]\n{line}\n"), &g).unwrap_err();
        assert!(check(&err), "{line}: {err:?}");
    }
}

#[test]
fn solution_document_of_bribe() {
    let g = game("bribe.game");
    let doc: Value = serde_json::from_str(&serialize_solution(&g, &rationalizability(&g).unwrap())).unwrap();
    assert_eq!(doc["schema"], SCHEMA);
    assert_eq!(doc["fixed_point"], 3);
    let last = &doc["rounds"][3]["survivors"];
    assert_eq!(last[0]["strategies"], serde_json::json!(["B.I"]));
    assert_eq!(last[1]["strategies"], serde_json::json!(["A"]));
    assert_eq!(doc["outcomes"][0]["node"], "zBAI");
    assert_eq!(doc["outcomes"][0]["payoffs"], serde_json::json!(["1", "1"]));
    assert_eq!(doc["empty"], false);
    assert_eq!(doc["exact"], true);
    let w = &doc["witnesses"][0];
    assert_eq!(w["strategy"], "B.I");
    assert_eq!(w["beliefs"][0]["distribution"][0]["probability"], "1");
}

#[test]
fn solution_records_eliminations() {
    let g = game("bribe.game");
    let d = restrictions(&g, "bribe_ann_r.restrict").as_dyn();
    let doc: Value = serde_json::from_str(&serialize_solution(&g, &selective_rationalizability(&g, &d).unwrap())).unwrap();
    assert_eq!(doc["empty"], true);
    let e = &doc["eliminations"][0];
    assert_eq!((e["round"].clone(), e["player"].clone(), e["strategy"].clone()), (1.into(), "Ann".into(), "B.I".into()));
    assert_eq!(e["reason"], "no-admissible-belief");
}

#[test]
fn serialization_is_deterministic() {
    let g = game("cleo.game");
    let d = restrictions(&g, "cleo_nw.restrict").as_dyn();
    let a = serialize_solution(&g, &strong_delta_rationalizability(&g, &d).unwrap());
    for _ in 0..3 {
        assert_eq!(serialize_solution(&g, &strong_delta_rationalizability(&g, &d).unwrap()), a);
    }
}

#[test]
fn rationals_are_written_as_fractions() {
    let g = game("cleo.game");
    let doc: Value = serde_json::from_str(&serialize_solution(&g, &rationalizability(&g).unwrap())).unwrap();
    let payoffs: Vec<&Value> = doc["outcomes"].as_array().unwrap().iter().map(|o| &o["payoffs"][2]).collect();
    assert!(payoffs.contains(&&Value::from("33/10")));
    assert!(payoffs.contains(&&Value::from("18/5")));
}
