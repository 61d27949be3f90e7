mod common;

use std::process::Command;

use common::fixture_path;
use forwind::cli::*;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["forwind".to_string()];
    for a in args {
        argv.push(match a.strip_prefix('@') {
            Some(f) => fixture_path(f).display().to_string(),
            None => a.to_string(),
        });
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("forwind-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn selective_bribe_is_empty_after_round_one() {
    let (code, out, _) = run(&["--game", "@bribe.game", "--restrictions", "@bribe_ann_r.restrict", "--procedure", "selective"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solution set empty after round 1"), "{out}");
}

#[test]
fn strong_delta_bribe_plays_n() {
    let (code, out, _) = run(&["--game", "@bribe.game", "--restrictions", "@bribe_ann_r.restrict", "--procedure", "strong-delta"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("outcomes: {zN (0, 0)}"), "{out}");
}

#[test]
fn compare_modes() {
    let (_, out, _) = run(&["--game", "@cleo.game", "--restrictions", "@cleo_nw.restrict", "--compare", "selective,no-s3"]);
    assert!(out.contains("identical at every round"), "{out}");
    let (_, out, _) = run(&["--game", "@bribe.game", "--restrictions", "@bribe_ann_r.restrict", "--compare", "selective,strong-delta"]);
    assert!(out.contains("solutions: disjoint"), "{out}");
    let (_, out, _) = run(&["--game", "@bribe.game", "--compare", "rationalizability,generalized"]);
    assert!(out.contains("identical at every round") && out.contains("solutions: equal"), "{out}");
    let (_, out, _) = run(&["--game", "@cleo.game", "--restrictions", "@cleo_nw.restrict", "--compare", "selective,rationalizability", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcomes"], "first included in second");
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["--game", "@cleo.game", "--restrictions", "@cleo_se_path.restrict", "--procedure", "selective", "--format", "json"];
    let (code, first, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    for _ in 0..3 {
        assert_eq!(run(&args).1, first);
    }
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["schema"], forwind::dsl::SCHEMA);
}

#[test]
fn oracle_check_passes_on_fixtures() {
    let (code, out, err) = run(&["--game", "@cleo.game", "--restrictions", "@cleo_nw.restrict", "--procedure", "selective", "--oracle-check", "4", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["oracle"]["disagreements"], 0);
    assert!(v["oracle"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn stability_scenario_table() {
    let (code, out, _) = run(&["--game", "@cleo.game", "--stability-scenario", "@cleo_stability.toml"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("PASS").count(), 9, "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--game", "/no/such/file.game"]).0, EXIT_IO);
    assert_eq!(run(&["--game", "@bribe.game", "--procedure", "selective"]).0, EXIT_USAGE);
    assert_eq!(run(&["--game", "@bribe.game", "--procedure", "bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["--procedure", "selective"]).0, EXIT_USAGE);

    let garbled = temp_file("garbled.game", "[players]\nA\n[nodes]\nroot h : x ->\n");
    assert_eq!(run(&["--game", &garbled]).0, EXIT_PARSE);

    let no_recall = temp_file(
        "recall.game",
        "[players]\nA\nB\n[infosets]\nh A : x y\ng A : u v\n[nodes]\nroot h : x -> n1, y -> n2\n\
         n1 g : u -> z1, v -> z2\nn2 g : u -> z3, v -> z4\n[terminals]\nz1 : 0, 0\nz2 : 0, 0\nz3 : 0, 0\nz4 : 0, 0\n",
    );
    let (code, _, err) = run(&["--game", &no_recall]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("PerfectRecallViolation"), "{err}");

    let infeasible = temp_file("infeasible.restrict", "[restrictions]\nAnn @ a1 : P(Bob = R) = 2\n");
    assert_eq!(run(&["--game", "@bribe.game", "--restrictions", &infeasible, "--procedure", "strong-delta"]).0, EXIT_VALIDATION);

    let outside = temp_file("outside.restrict", "[restrictions]\nBob @ b : P(Ann@a2 = y) = 1\n");
    let game = temp_file(
        "outside.game",
        "[players]\nAnn\nBob\n[infosets]\na1 Ann : O I\nb Bob : l r\na2 Ann : x y\n[nodes]\n\
         root a1 : O -> zO, I -> xb\nxb b : l -> xa, r -> zr\nxa a2 : x -> zx, y -> zy\n\
         [terminals]\nzO : 5, 0\nzr : 0, 1\nzx : 1, 2\nzy : 0, 0\n",
    );
    assert_eq!(run(&["--game", &game, "--restrictions", &outside, "--procedure", "no-s3"]).0, EXIT_PRECONDITION);
}

#[test]
fn binary_reports_validity() {
    let out = Command::new(env!("CARGO_BIN_EXE_forwind"))
        .args(["--game", &fixture_path("bribe.game").display().to_string()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("game bribe is valid"));
}
