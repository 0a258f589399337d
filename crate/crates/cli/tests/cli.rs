use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_linguafraud");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn synth_corpus(dir: &Path, seed: &str) {
    let out = run_in(dir, &["synth", "--out", "corpus", "--seed", seed]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn extract_writes_one_row_per_call() {
    let dir = tempfile::tempdir().unwrap();
    synth_corpus(dir.path(), "5");
    let out = run_in(dir.path(), &["extract", "corpus", "--out", "m.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 57);
    assert_eq!(lines[0].split(',').count(), 1 + 27 + 1);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["lexicon_version"], "markers-v1");

    let out = run_in(dir.path(), &["extract", "corpus", "--features", "markers"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 1 + 16 + 1);
    assert_eq!(text.lines().count(), 57);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d, "5");

    assert_eq!(code(&run_in(d, &["extract", "missing"])), 2);
    assert_eq!(code(&run_in(d, &["evaluate", "corpus", "--k", "500"])), 2);
    assert_eq!(code(&run_in(d, &["evaluate", "corpus", "--models", "forest"])), 2);
    assert_eq!(code(&run_in(d, &["evaluate", "corpus", "--sentiment", "vader"])), 2);
    assert_eq!(code(&run_in(d, &["evaluate", "corpus", "--standardize", "maybe"])), 2);
    assert_eq!(code(&run_in(d, &["frobnicate"])), 2);

    fs::create_dir(d.join("empty")).unwrap();
    assert_eq!(code(&run_in(d, &["extract", "empty"])), 2);

    fs::create_dir(d.join("agent_only")).unwrap();
    fs::write(
        d.join("agent_only/a.json"),
        r#"{"id": "a", "label": "fraud", "turns": [{"speaker": "agent", "text": "Hello?"}]}"#,
    )
    .unwrap();
    let out = run_in(d, &["extract", "agent_only"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no customer responses"), "{}", stderr(&out));
}

#[test]
fn model_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d, "8");
    let out = run_in(d, &["evaluate", "corpus", "--out", "out", "--features", "combined", "--models", "knn,tree"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("Markers + Sentiment"));
    let models: Vec<String> = fs::read_dir(d.join("out/models"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(models.len(), 2);

    let knn = "out/models/combined-knn.model.json";
    let out = run_in(d, &["explain", knn]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("query"));
    let out = run_in(d, &["explain", knn, "--transcript", "corpus/call_003.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("call_003"));

    let tree = "out/models/combined-tree.model.json";
    let out = run_in(d, &["explain", tree, "--out", "tree.dot"]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(d.join("tree.dot")).unwrap().starts_with("digraph"));

    let out = run_in(d, &["predict", tree, "corpus/call_001.json", "--out", "p.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(first == "call_001\tfraud" || first == "call_001\tnon_fraud", "{first}");
    assert!(stdout(&out).contains("prediction: v:"));
    let p: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("p.json")).unwrap()).unwrap();
    assert_eq!(p["features"].as_array().unwrap().len(), 27);

    // a lexicon with another version must not be used with this model
    let mut lex: serde_json::Value =
        serde_json::from_str(include_str!("../../core/data/markers-v1.json")).unwrap();
    lex["version"] = "markers-v2".into();
    fs::write(d.join("lex2.json"), lex.to_string()).unwrap();
    let out = run_in(d, &["predict", tree, "corpus/call_001.json", "--lexicon", "lex2.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("markers-v2"), "{}", stderr(&out));
}

#[test]
fn evaluate_reads_an_extracted_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth_corpus(d, "9");
    assert_eq!(code(&run_in(d, &["extract", "corpus", "--out", "m.csv"])), 0);
    let a = run_in(d, &["evaluate", "corpus", "--out", "a"]);
    let b = run_in(d, &["evaluate", "m.csv", "--out", "b"]);
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    assert_eq!(
        fs::read_to_string(d.join("a/report.txt")).unwrap(),
        fs::read_to_string(d.join("b/report.txt")).unwrap()
    );
    assert_eq!(code(&a), 0);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("run.json"), r#"{"seed": 21, "synth": {"n_fraud": 10, "n_non_fraud": 10}}"#).unwrap();
    let out = run_in(d, &["synth", "--config", "run.json", "--out", "c"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("wrote 20 transcripts"));
    assert!(stdout(&out).contains("seed 21"));

    fs::write(d.join("bad.json"), r#"{"sede": 21}"#).unwrap();
    assert_eq!(code(&run_in(d, &["synth", "--config", "bad.json"])), 2);
}

fn tree_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(p) = stack.pop() {
        for e in fs::read_dir(&p).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn full_pipeline_is_byte_for_byte_repeatable() {
    let runs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut outputs = Vec::new();
    for dir in &runs {
        let d = dir.path();
        let steps: [&[&str]; 5] = [
            &["synth", "--out", "corpus", "--seed", "11", "--signal", "0.6"],
            &["extract", "corpus", "--out", "m.csv"],
            &["evaluate", "m.csv", "--out", "out", "--seed", "4"],
            &["explain", "out/models/combined-tree.model.json", "--out", "tree.dot"],
            &["predict", "out/models/markers-svm.model.json", "corpus/call_010.json", "--out", "p.json"],
        ];
        let mut log = Vec::new();
        for args in steps {
            let out = run_in(d, args);
            assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
            log.push(out.stdout);
        }
        outputs.push(log);
    }
    assert_eq!(outputs[0], outputs[1]);
    let (a, b) = (runs[0].path(), runs[1].path());
    let files = tree_files(a);
    assert_eq!(files, tree_files(b));
    assert!(files.len() > 60);
    for f in &files {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{}", f.display());
    }
}
