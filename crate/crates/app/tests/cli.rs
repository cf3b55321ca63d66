use std::path::{Path, PathBuf};
use std::process::Command;

use shg::patterns::Query;
use shg::{Hyperedge, Store};
use shg_app::cli::run;
use shg_app::commands;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn core_data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn shg(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("shg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(s: &str) -> Vec<String> {
    s.lines().map(str::to_string).collect()
}

fn h(s: &str) -> Hyperedge {
    s.parse().unwrap()
}

#[test]
fn oie_population_tuple() {
    let (code, out, err) = shg(&["oie", "--input", data("population.txt").to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(lines(&out).contains(
        &"⟨the population of the special wards, is, over 9 million people, with the total population of the prefecture exceeding 13 million⟩"
            .to_string()
    ));
    // same as calling the module directly
    let store = commands::read_input(&data("population.txt")).unwrap();
    assert_eq!(lines(&out), commands::oie_lines(&store, false));
}

/// Σ(|e_i| − 1) over the edges that contain `e` directly, found by brute force.
fn degree_oracle(top: &[Hyperedge], e: &Hyperedge) -> usize {
    let mut containing = std::collections::BTreeSet::new();
    for t in top {
        for sub in t.subedges() {
            if !sub.is_atom() && sub.elements().contains(e) {
                containing.insert(sub.clone());
            }
        }
    }
    containing.iter().map(|c| c.len() - 1).sum()
}

#[test]
fn metrics_on_single_edge_store() {
    let (code, out, err) = shg(&["metrics", "--edge", "germany/C", "--input", data("berlin.txt").to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let top = vec![h("(is/P berlin/C (of/B capital/C germany/C))")];
    assert_eq!(v["degree"], degree_oracle(&top, &h("germany/C")));
    assert_eq!(v["degree"], 2);
    // Δ = {(of/B ...), outer edge}: each contributes its size minus one
    assert_eq!(v["deep_degree"], 2 + 2);
    assert_eq!(v["neighborhood"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let (code, out, err) = shg(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn module_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "(is/P berlin/C nice/C)\n(is/P (broken\n").unwrap();
    let (code, _, err) = shg(&["oie", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, err) = shg(&["match", "(is/P", "--input", data("berlin.txt").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("malformed pattern"), "{err}");
    let (code, _, err) = shg(&["oie"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn match_is_a_thin_adapter() {
    let pop = data("population.txt");
    let (code, out, _) = shg(&["match", "(is/P.{sc} X/C Y)", "--input", pop.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    let (_, out, _) = shg(&["match", "(is/P.{sc} X/C Y)", "--input", data("berlin.txt").to_str().unwrap()]);
    assert!(out.is_empty());
    let store = commands::read_input(&data("claims.txt")).unwrap();
    let q: Query = "(PRED/P.{sr} ACTOR CLAIM)".parse().unwrap();
    let (_, out, _) = shg(&["match", "(PRED/P.{sr} ACTOR CLAIM)", "--input", data("claims.txt").to_str().unwrap()]);
    assert_eq!(lines(&out), commands::match_lines(&store, &q));
    assert_eq!(out.lines().count(), 3);
    assert!(out.contains("ACTOR=russia/C"));
}

#[test]
fn rules_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(&input, "(is/P.sc berlin/C nice/C)\n(says/P.sr x/C (is/P.sc paris/C big/C))\n").unwrap();
    let (code, out, err) = shg(&["rules", "--rules", data("rules.txt").to_str().unwrap(), "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(lines(&out), ["(type/P.so berlin/C nice/C)", "(type/P.so paris/C big/C)"]);
    let (code, _, err) = shg(&["rules", "--rules", "/nonexistent/rules.txt", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("does not exist"), "{err}");
}

#[test]
fn claims_and_conflicts() {
    let (code, out, _) = shg(&["claims", "--input", data("claims.txt").to_str().unwrap()]);
    assert_eq!(code, 0);
    let claims: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(claims.len(), 2);
    let russia = claims.iter().find(|c| c["actor"] == "russia/C").unwrap();
    assert_eq!(russia["claim"], "(is/P.sc russia/C ready/C)");
    assert_eq!(russia["tense"], "present");

    let (code, out, _) = shg(&["conflicts", "--input", data("conflicts.txt").to_str().unwrap()]);
    assert_eq!(code, 0);
    // praises is outside the conflict lemma set
    assert_eq!(out.lines().count(), 4);
    assert!(!out.contains("praises"));
}

#[test]
fn factions_split() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("net.dot");
    let (code, out, err) = shg(&[
        "factions",
        "--input",
        data("conflicts.txt").to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let ls = lines(&out);
    let side = |actor: &str| ls.iter().find(|l| l.ends_with(actor)).unwrap().split('\t').next().unwrap().to_string();
    assert_eq!(side("usa/C"), side("uk/C"));
    assert_eq!(side("russia/C"), side("iran/C"));
    assert_ne!(side("usa/C"), side("russia/C"));
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn coref_and_mine() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(
        &input,
        "(is/P.sc (+/B.am barack/C obama/C) president/C)\n(met/P.so (+/B.am michelle/C obama/C) obama/C)\n",
    )
    .unwrap();
    let (code, out, err) = shg(&["coref", "obama/C", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["seed"], "obama/C");
    assert_eq!(v["sets"].as_array().unwrap().len(), 2);

    let (code, out, _) = shg(&["mine", "--top", "1", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    let store = commands::read_input(&input).unwrap();
    let cfg = shg::learning::GeneralizationConfig::default();
    assert_eq!(lines(&out), commands::mine_lines(&store, &cfg, Some(1)));
}

#[test]
fn train_then_parse() {
    let dir = tempfile::tempdir().unwrap();
    let forest = dir.path().join("forest.json");
    let train = core_data("alpha_train.jsonl");
    let (code, out, err) = shg(&[
        "train-alpha",
        "--input",
        train.to_str().unwrap(),
        "--out",
        forest.to_str().unwrap(),
        "--trees",
        "10",
        "--seed",
        "1",
        "--no-bootstrap",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("trees\t10"));
    assert!(out.contains("train_accuracy\t1.0000"), "{out}");

    let (code, out, err) = shg(&["parse", "--input", train.to_str().unwrap(), "--forest", forest.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(lines(&out).contains(&"(is/P.sc berlin/C (the/M (of/B.ma capital/C germany/C)))".to_string()), "{out}");

    // parse into a store, keeping lemma edges and span text
    let store = dir.path().join("s.shg");
    let (code, out, err) = shg(&[
        "add",
        "--sentences",
        train.to_str().unwrap(),
        "--forest",
        forest.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("added\t"));
    let s = Store::load(&store).unwrap();
    let e = h("(is/P.sc berlin/C (the/M (of/B.ma capital/C germany/C)))");
    assert_eq!(s.attributes(&e).unwrap().text.as_deref(), Some("Berlin is the capital of Germany ."));
    assert!(s.lemma_of(&shg::hedge::parse_atom("is/P").unwrap()).is_some());
}

#[test]
fn add_then_query_store_through_env() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.shg");
    let ignored = dir.path().join("ignored.shg");
    let bin = env!("CARGO_BIN_EXE_shg");
    let out = Command::new(bin)
        .args(["add", data("berlin.txt").to_str().unwrap(), data("berlin.txt").to_str().unwrap()])
        .args(["--store", ignored.to_str().unwrap()])
        .env("SHG_STORE", &store)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!ignored.exists());
    let s = Store::load(&store).unwrap();
    assert_eq!(s.count(&h("(is/P berlin/C (of/B capital/C germany/C))")), 2);

    let out = Command::new(bin)
        .args(["metrics", "--edge", "germany/C"])
        .env("SHG_STORE", &store)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degree"], 2);

    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
