use std::path::PathBuf;
use std::process::Command;

use ieak::duality::frame_isomorphism;
use ieak::suites::CardsFixture;
use ieak_cli::files::{read_json, ActionsFile, ModelFile};
use ieak_cli::{cards_fixture, CARDS_ACTIONS, CARDS_MODEL};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.display().to_string()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ieak(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_ieak")).args(args).output().expect("run binary");
    Out {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

#[test]
fn shipped_fixture_matches_builtin() {
    let fx = cards_fixture(None, None).unwrap();
    let builtin = CardsFixture::builtin();
    assert_eq!(fx.model, builtin.model);
    assert_eq!(fx.alpha, builtin.alpha);
    assert_eq!(fx.beta, builtin.beta);
    assert!(!CARDS_MODEL.is_empty() && !CARDS_ACTIONS.is_empty());
}

#[test]
fn parse_prints_canonical_form() {
    let out = ieak(&["parse", "~p & (q | r) -> box a p"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "(p -> false) & (q | r) -> box a p\n");
    let again = ieak(&["parse", out.stdout.trim()]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn parse_error_is_an_input_error() {
    let out = ieak(&["parse", "p & & q"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("1:"), "{}", out.stderr);
}

#[test]
fn eval_cards() {
    let (m, a) = (data("cards_model.json"), data("cards_actions.json"));
    let out = ieak(&["eval", "--model", &m, "--actions", &a, "box c Ga"]);
    assert_eq!(out.stdout, "\n");
    let out = ieak(&["eval", "--model", &m, "--actions", &a, "<alpha> box c Ga"]);
    assert_eq!(out.stdout, "\n");
    let out = ieak(&["eval", "--model", &m, "--actions", &a, "[alpha][beta] box c Ga"]);
    assert_eq!(out.stdout, "Gb Ga Gc\n");
    let out = ieak(&["eval", "--model", &m, "--actions", &a, "<alpha><beta> true"]);
    assert_eq!(out.stdout, "Ga\n");
}

#[test]
fn update_writes_a_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ma.json");
    let out = ieak(&[
        "update",
        "--model",
        &data("cards_model.json"),
        "--actions",
        &data("cards_actions.json"),
        "--action",
        "alpha",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mf: ModelFile = read_json(&path).unwrap();
    assert_eq!(mf.worlds, ["(Ga,k)", "(Gb,l)", "(Gc,l)"]);
    let twice = ieak(&[
        "update",
        "--model",
        &data("cards_model.json"),
        "--actions",
        &data("cards_actions.json"),
        "--action",
        "alpha",
        "--action",
        "beta",
    ]);
    let mf: ModelFile = serde_json::from_str(&twice.stdout).unwrap();
    assert_eq!(mf.worlds, ["((Ga,k),s)"]);
}

#[test]
fn dot_of_one_world_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    std::fs::write(&path, r#"{"worlds": ["w"], "relations": {"a": [["w", "w"]]}, "valuation": {"p": ["w"]}}"#).unwrap();
    let out = ieak(&["export-dot", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.matches("[label=").count(), 1);
    assert!(!out.stdout.contains("->"));
}

#[test]
fn dot_of_cards_model() {
    let out = ieak(&["export-dot", &data("cards_model.json")]);
    let nodes = out.stdout.lines().filter(|l| l.contains("[label=\"G")).count();
    assert_eq!(nodes, 3);
    let edges: Vec<&str> = out.stdout.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(
        edges,
        [
            r#"  "Gb" -> "Gc" [label="a", dir=none];"#,
            r#"  "Ga" -> "Gc" [label="b", dir=none];"#,
            r#"  "Gb" -> "Ga" [label="c", dir=none];"#,
        ]
    );
}

#[test]
fn dot_of_update_has_no_c_edge_between_the_white_worlds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ma.json");
    let path = path.to_str().unwrap();
    let m = data("cards_model.json");
    let a = data("cards_actions.json");
    assert_eq!(ieak(&["update", "--model", &m, "--actions", &a, "--action", "alpha", "-o", path]).code, 0);
    let out = ieak(&["export-dot", path]);
    let c_edges: Vec<&str> = out.stdout.lines().filter(|l| l.contains("label=\"c\"")).collect();
    assert_eq!(c_edges, [r#"  "(Ga,k)" -> "(Gb,l)" [label="c", dir=none];"#]);
    assert!(out.stdout.contains(r#""(Gb,l)" -> "(Gc,l)" [label="a", dir=none]"#));
}

#[test]
fn order_edges_are_dashed() {
    let out = ieak(&["export-dot", &data("two_chain.json")]);
    assert!(out.stdout.contains(r#""u" -> "v" [style=dashed, arrowhead=none];"#), "{}", out.stdout);
}

#[test]
fn lattice_dot_is_a_hasse_diagram() {
    let out = ieak(&["export-dot", &data("chain3.json")]);
    let edges: Vec<&str> = out.stdout.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(edges, [r#"  "0" -> "m";"#, r#"  "m" -> "1";"#]);
}

#[test]
fn eval_alg_expectations() {
    let alg = data("chain3.json");
    let out = ieak(&["eval-alg", "--algebra", &alg, "--val", "p=m", "p | ~p"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "m\n"));
    let out = ieak(&["eval-alg", "--algebra", &alg, "--val", "p=m", "p | ~p", "--expect", "top"]);
    assert_eq!(out.code, 1);
    let out = ieak(&["eval-alg", "--algebra", &alg, "--val", "p=m", "~~p", "--expect", "top"]);
    assert_eq!(out.code, 0);
    let out = ieak(&["eval-alg", "--algebra", &alg, "p -> p", "--all-valuations"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = ieak(&["eval-alg", "--algebra", &alg, "p | ~p", "--all-valuations"]);
    assert_eq!(out.code, 1);
    let out = ieak(&["eval-alg", "--algebra", &alg, "--val", "p=nowhere", "p"]);
    assert_eq!(out.code, 2);
}

#[test]
fn normalize_with_trace() {
    let out = ieak(&["normalize", "--actions", &data("cards_actions.json"), "[beta] Ga", "--trace"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["axiom"], "box-atom");
    let nf = v["normalForm"].as_str().unwrap();
    assert!(!nf.contains('['), "{nf}");
}

#[test]
fn normalize_check_reports_equivalence() {
    let out = ieak(&["normalize", "--actions", &data("cards_actions.json"), "[alpha] box c Ga", "--check", "--max-worlds", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("equivalent on"));
}

#[test]
fn check_frame_names_the_condition() {
    let out = ieak(&["check-frame", "--model", &data("broken_frame.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("(R∘≥) ⊆ (≥∘R) fails"), "{}", out.stdout);
    let out = ieak(&["check-frame", "--model", &data("two_chain.json")]);
    assert_eq!(out.code, 0);
    let out = ieak(&["check-frame", "--model", &data("cards_model.json"), "--mode", "mipc"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn invalid_frame_is_rejected_on_load() {
    let out = ieak(&["eval", "--model", &data("broken_frame.json"), "p"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not a ik frame"), "{}", out.stderr);
}

#[test]
fn check_algebra() {
    let out = ieak(&["check-algebra", "--algebra", &data("chain3.json"), "--mha"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // A diamond that is not monotone.
    std::fs::write(
        &path,
        r#"{"elements": ["0", "1"], "leq": [["0", "1"]], "dia": {"a": {"0": "1", "1": "0"}}, "box": {"a": {"0": "0", "1": "1"}}}"#,
    )
    .unwrap();
    let out = ieak(&["check-algebra", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
}

#[test]
fn dualize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("alg.json");
    let back = dir.path().join("back.json");
    let frame = data("two_chain.json");
    assert_eq!(ieak(&["dualize", &frame, "-o", alg.to_str().unwrap()]).code, 0);
    assert_eq!(ieak(&["dualize", alg.to_str().unwrap(), "-o", back.to_str().unwrap()]).code, 0);
    let f0 = read_json::<ModelFile>(std::path::Path::new(&frame)).unwrap().frame().unwrap();
    let f1 = read_json::<ModelFile>(&back).unwrap().frame().unwrap();
    assert!(frame_isomorphism(&f0, &f1).unwrap().is_some());
}

#[test]
fn verify_frames_with_broken_fixture_fails() {
    let out = ieak(&["verify", "frames", "--max-worlds", "2", "--fixture", &data("broken_frame.json"), "--json"]);
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let failures = v["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().contains("(R∘≥) ⊆ (≥∘R) fails")), "{failures:?}");
}

#[test]
fn verify_small_suites() {
    let out = ieak(&["verify", "frames", "--max-worlds", "2", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = ieak(&["verify", "soundness", "--max-worlds", "2", "--samples", "5"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("soundness: PASS"));
}

#[test]
fn verify_rejects_bad_input() {
    assert_eq!(ieak(&["verify", "nonsense"]).code, 2);
    let out = ieak(&["verify", "duality", "--max-worlds", "9"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("maxWorlds"), "{}", out.stderr);
}

#[test]
fn action_without_relation_for_an_agent_is_rejected() {
    let mut file: ActionsFile = read_json(std::path::Path::new(&data("cards_actions.json"))).unwrap();
    file.actions[0].relations.remove("b");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("actions.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = ieak(&["eval", "--model", &data("cards_model.json"), "--actions", path.to_str().unwrap(), "p"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("no relation for agent `b`"), "{}", out.stderr);
}

#[test]
fn scenario_with_perturbed_model() {
    // Agent `a` sees only its own world: the premise fails wherever the goal does.
    let mut mf: ModelFile = read_json(std::path::Path::new(&data("cards_model.json"))).unwrap();
    mf.relations.insert("a".into(), mf.worlds.iter().map(|w| (w.clone(), w.clone())).collect());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, serde_json::to_string(&mf).unwrap()).unwrap();
    let out = ieak(&["scenario", "cards", "--model", path.to_str().unwrap(), "--max-worlds", "2", "--samples", "20", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    // The figures no longer match, so the scenario fails on the example checks only.
    assert_eq!(out.code, 1);
    assert_eq!(v["example"]["passed"], false);
    assert_eq!(v["entailment"]["failures"].as_array().unwrap().iter().filter(|f| !f.as_str().unwrap().starts_with("example")).count(), 0);
}
