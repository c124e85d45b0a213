use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fds::fds_core::corpus::{ArgLabel, Role, Vocabulary};
use fds::fds_core::model::{LinkMatrix, SemanticFunction};
use fds::fds_core::{FdsModel, SpaceConfig};
use tempfile::TempDir;

fn fds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fds")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CORPUS: &str =
    "# toy\ndog\tchase\tcat\ncat\tchase\tdog\ndog\teat\tbone\ncat\teat\tfish\n_\tbark\tdog\ndog\tbark\t_\n\
dog\tchase\tcat\ncat\teat\tfish\ndog\teat\tbone\ncat\tchase\tdog\ndog\tbark\t_\ncat\teat\tbone\n";

/// Three nouns over D = 3, C = 1: `a` and `a2` share a function, `b` leans on
/// a's dimension partly, `c` on a different one.
fn hand_model(dir: &TempDir) -> PathBuf {
    let vocab = Vocabulary::from_counts(
        [
            ("a", Role::Noun, 1),
            ("a2", Role::Noun, 1),
            ("b", Role::Noun, 1),
            ("c", Role::Noun, 1),
            ("see", Role::Verb, 1),
            ("mute", Role::Noun, 1),
        ],
        1,
    );
    let mut m = FdsModel::zeros(SpaceConfig::new(3, 1).unwrap(), vocab);
    let set = |m: &mut FdsModel, f: &str, w: [f64; 3], b: f64| {
        let id = m.vocab().resolve(f, None).unwrap();
        m.set_function(id, SemanticFunction::new(w.to_vec(), b).unwrap())
            .unwrap();
    };
    set(&mut m, "a", [3.0, -3.0, -3.0], 0.0);
    set(&mut m, "a2", [3.0, -3.0, -3.0], 0.0);
    set(&mut m, "b", [1.0, 1.0, -3.0], 0.0);
    set(&mut m, "c", [-3.0, -3.0, 3.0], 0.0);
    set(&mut m, "see", [0.5, -0.5, 1.0], 0.2);
    let mut l = LinkMatrix::zeros(ArgLabel::Arg1, 3);
    l.set(0, 0, 1.0);
    l.set(2, 1, -0.5);
    m.set_link(l).unwrap();
    let p = dir.path().join("hand.json");
    fds::io::save_model(&p, &m).unwrap();
    p
}

#[test]
fn init_is_reproducible_and_reports_shape() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.tsv", CORPUS);
    let (m1, m2) = (dir.path().join("m1.json"), dir.path().join("m2.json"));
    for m in [&m1, &m2] {
        let o = fds(&[
            "init",
            "--corpus",
            s(&c),
            "--dim",
            "50",
            "--card",
            "5",
            "--seed",
            "7",
            "--min-count",
            "1",
            "--out",
            s(m),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), "vocab 7\ndim 50\ncard 5\nseed 7\n");
    }
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());
    let model = fds::io::load_model(&m1).unwrap();
    assert_eq!(model.config().dim(), 50);

    let m3 = dir.path().join("m3.json");
    let o = fds(&[
        "init",
        "--corpus",
        s(&c),
        "--dim",
        "50",
        "--card",
        "5",
        "--seed",
        "8",
        "--min-count",
        "1",
        "--out",
        s(&m3),
    ]);
    assert!(o.status.success());
    assert_ne!(std::fs::read(&m1).unwrap(), std::fs::read(&m3).unwrap());

    let reused = dir.path().join("reused.json");
    let o = fds(&[
        "init",
        "--corpus",
        s(&c),
        "--dim",
        "50",
        "--card",
        "5",
        "--seed",
        "7",
        "--vocab-from",
        s(&m1),
        "--out",
        s(&reused),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&reused).unwrap());
}

#[test]
fn init_usage_and_data_errors() {
    let dir = TempDir::new().unwrap();
    let o = fds(&["init", "--dim", "10", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));

    let o = fds(&["init", "--corpus", "c.tsv", "--dim", "ten", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));

    let c = write(&dir, "c.tsv", CORPUS);
    let out = dir.path().join("m.json");
    let o = fds(&[
        "init",
        "--corpus",
        s(&c),
        "--dim",
        "50",
        "--card",
        "5",
        "--min-count",
        "100",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty corpus"), "{}", stderr(&o));
    assert!(!out.exists());

    let bad = write(&dir, "bad.tsv", "dog\tchase\tcat\ndog\tchase\n");
    let o = fds(&[
        "init",
        "--corpus",
        s(&bad),
        "--dim",
        "50",
        "--card",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.tsv:2:"), "{}", stderr(&o));

    let o = fds(&["init", "--corpus", s(&c), "--dim", "5", "--card", "5", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid space"));

    let o = fds(&[
        "init",
        "--corpus",
        s(&dir.path().join("none.tsv")),
        "--dim",
        "50",
        "--card",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("none.tsv"));
}

#[test]
fn help_exits_cleanly() {
    let o = fds(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let o = fds(&["init", "--help"]);
    assert!(stdout(&o).contains("[default: 1000]"));
    assert_eq!(fds(&[]).status.code(), Some(2));
}

#[test]
fn eval_sim_matches_hand_spearman() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    // Scores fall in the order (a, a2) > (a, b) > (a, c); gold ranks are 3, 1, 2.
    let data = write(&dir, "sim.tsv", "a\ta2\t9\na\tb\t1\na\tc\t5\nzebra\ta\t3\n");
    let o = fds(&["eval-sim", "--model", s(&m), "--data", s(&data), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(r["n"], 3);
    assert_eq!(r["skipped"], 1);
    assert_eq!(r["coverage"], 0.75);
    assert_eq!(r["metric"], "spearman");
    assert!(stderr(&o).contains("skipped 1"));

    let oov = write(&dir, "oov.tsv", "zebra\tyak\t1\n");
    let o = fds(&["eval-sim", "--model", s(&m), "--data", s(&oov)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no item is covered"));
}

#[test]
fn ensemble_flags() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    let data = write(&dir, "sim.tsv", "a\ta2\t9\na\tb\t1\na\tc\t5\n");
    let emb = write(
        &dir,
        "e.txt",
        "3 2\na 1 0\na2 0 1\nb 1 0.1\nc 1 1\n".replace("3 2", "4 2").as_str(),
    );
    // Cosines rank the pairs 1, 3, 2; gold ranks them 3, 1, 2.
    let o = fds(&[
        "eval-sim",
        "--model",
        s(&m),
        "--data",
        s(&data),
        "--embeddings",
        s(&emb),
        "--alpha",
        "0",
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r["value"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(r["alpha"], 0.0);
    let o = fds(&["eval-sim", "--model", s(&m), "--data", s(&data), "--alpha", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
}

fn relpron_fixture(dir: &TempDir) -> (PathBuf, PathBuf) {
    let c = write(dir, "c.tsv", &CORPUS.repeat(20));
    let m = dir.path().join("m.json");
    let o = fds(&[
        "init",
        "--corpus",
        s(&c),
        "--dim",
        "30",
        "--card",
        "3",
        "--seed",
        "1",
        "--min-count",
        "1",
        "--out",
        s(&m),
    ]);
    assert!(o.status.success());
    let data = write(
        dir,
        "rp.tsv",
        "dog\tSBJ\tdog\tchase\tcat\ncat\tSBJ\tcat\teat\tfish\ndog\tOBJ\tdog\tchase\tcat\nbone\tOBJ\tbone\teat\tdog\n",
    );
    (m, data)
}

#[test]
fn relpron_top_ranked_gold_gives_map_one() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    // Each term's own properties have a hypernym sharing its function.
    let data = write(
        &dir,
        "rp.tsv",
        "a\tSBJ\ta2\tsee\tb\nc\tOBJ\tc\tsee\tb\na\tOBJ\ta\tsee\tc\n",
    );
    let o = fds(&["eval-relpron", "--model", s(&m), "--data", s(&data), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["task", "metric", "value", "coverage", "n", "skipped", "per_term"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["metric"], "map");
    assert_eq!(r["per_term"].as_array().unwrap().len(), 2);
    assert_eq!(r["value"], 1.0);
}

#[test]
fn evaluation_ignores_thread_count() {
    let dir = TempDir::new().unwrap();
    let (m, data) = relpron_fixture(&dir);
    let svo = write(
        &dir,
        "svo.tsv",
        "dog\tchase\tcat\teat\t2\ncat\teat\tfish\tchase\t1\ndog\teat\tbone\tbark\t4\ncat\tchase\tdog\teat\t3\n",
    );
    for (cmd, d) in [("eval-relpron", &data), ("eval-svo", &svo)] {
        let run = |t: &str| fds(&[cmd, "--model", s(&m), "--data", s(d), "--threads", t, "--json"]);
        let one = run("1");
        assert!(one.status.success(), "{}", stderr(&one));
        assert_eq!(one.stdout, run("4").stdout);
        assert_eq!(one.stdout, run("0").stdout);
    }
}

fn graph_file(dir: &TempDir) -> PathBuf {
    write(
        dir,
        "g.json",
        r#"{"nodes":[{"id":"x","pred":"a"},{"id":"y","pred":"see"}],"links":[{"from":"y","to":"x","label":"ARG1"}]}"#,
    )
}

#[test]
fn infer_prints_both_answers() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    let g = graph_file(&dir);
    let o = fds(&["infer", "--model", s(&m), "--graph", s(&g), "--query", "mute@x"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "mean_field 0.5\n");

    let o = fds(&["infer", "--model", s(&m), "--graph", s(&g), "--query", "b@x", "--exact"]);
    let out = stdout(&o);
    let vals: Vec<f64> = out
        .lines()
        .map(|l| l.split_once(' ').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(
        out.lines().map(|l| l.split(' ').next().unwrap()).collect::<Vec<_>>(),
        ["mean_field", "exact", "abs_diff"]
    );
    assert_eq!(vals[2], (vals[0] - vals[1]).abs());
    assert!(vals[2] < 0.15);

    let o = fds(&["infer", "--model", s(&m), "--graph", s(&g), "--query", "b@w"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`w`"));
    let o = fds(&[
        "infer",
        "--model",
        s(&m),
        "--graph",
        s(&g),
        "--query",
        "b@x",
        "--exact",
        "--cap",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("log10 size 0.95"), "{}", stderr(&o));
}

#[test]
fn quant_fixtures() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    let every = write(
        &dir,
        "every.json",
        r#"{"quant":"every","var":"x","restriction":{"preds":[["b","x"]]},"body":{"preds":[["b","x"]]},"graph":{"nodes":[{"id":"x"}]}}"#,
    );
    let o = fds(&["quant", "--model", s(&m), "--tree", s(&every)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "probability 1\n");

    let nested = write(
        &dir,
        "nested.json",
        r#"{"quant":"every","var":"x","restriction":{"preds":[["a","x"]]},
            "body":{"quant":"a","var":"z","restriction":{"preds":[["c","z"]]},
                    "body":{"quant":"some","var":"y","restriction":{"preds":[]},"body":{"preds":[["see","y"]]}}},
            "graph":{"nodes":[{"id":"x"},{"id":"y"},{"id":"z"}],
                     "links":[{"from":"y","to":"x","label":"ARG1"},{"from":"y","to":"z","label":"ARG2"}]}}"#,
    );
    let o = fds(&["quant", "--model", s(&m), "--tree", s(&nested), "--q-trace"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let p: f64 = out
        .lines()
        .next()
        .unwrap()
        .strip_prefix("probability ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(out.lines().filter(|l| l.starts_with("q ")).count(), 3);
    assert!(out.contains("q every x outer=[] "));

    let bad = write(&dir, "bad.json", "{\"quant\": \"every\",\n  \"var\": }");
    let o = fds(&["quant", "--model", s(&m), "--tree", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));
}

#[test]
fn model_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let m = hand_model(&dir);
    let text = std::fs::read_to_string(&m).unwrap();
    let v0 = write(&dir, "v0.json", &text.replacen("\"version\":1", "\"version\":\"0\"", 1));
    let g = graph_file(&dir);
    let o = fds(&["infer", "--model", s(&v0), "--graph", s(&g), "--query", "b@x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("supported versions: 1"));
    let cut = write(&dir, "cut.json", &text[..text.len() - 10]);
    let o = fds(&["infer", "--model", s(&cut), "--graph", s(&g), "--query", "b@x"]);
    assert!(stderr(&o).contains("truncated"));
}

#[test]
fn synth_is_seeded() {
    let dir = TempDir::new().unwrap();
    let w = write(
        &dir,
        "w.json",
        r#"{"categories":{"animal":["dog","cat"],"food":["bone"]},"frames":[{"verb":"eat","subj":"animal","obj":"food","weight":2},{"verb":"bark","subj":"animal","weight":1}]}"#,
    );
    let a = fds(&["synth", "--world", s(&w), "--seed", "3", "--n", "50"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(
        a.stdout,
        fds(&["synth", "--world", s(&w), "--seed", "3", "--n", "50"]).stdout
    );
    assert_ne!(
        a.stdout,
        fds(&["synth", "--world", s(&w), "--seed", "4", "--n", "50"]).stdout
    );
    let out = dir.path().join("c.tsv");
    fds(&["synth", "--world", s(&w), "--seed", "3", "--n", "50", "--out", s(&out)]);
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    assert_eq!(fds::io::read_triples(&out).unwrap().len(), 50);
}

#[test]
fn space_counts() {
    let o = fds(&["space", "--dim", "6", "--card", "2"]);
    assert_eq!(stdout(&o), "log10_pixies 1.176091\npixies 15\n");
}
