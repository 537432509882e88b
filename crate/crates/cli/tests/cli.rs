use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_advaug"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A tagger trained once through the CLI and shared by the tests below.
fn model() -> &'static Path {
    static MODEL: OnceLock<(TempDir, PathBuf)> = OnceLock::new();
    &MODEL
        .get_or_init(|| {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("tagger.model");
            let out = run(&[
                "train-tagger",
                "--corpus",
                s(&data("en-train.conllu")),
                "--dev",
                s(&data("en-dev.conllu")),
                "--out",
                s(&path),
            ]);
            assert!(out.status.success(), "{}", stderr(&out));
            let acc: f64 = stdout(&out)
                .lines()
                .find_map(|l| l.strip_prefix("dev accuracy: "))
                .and_then(|l| l.split_whitespace().next())
                .unwrap()
                .parse()
                .unwrap();
            assert!((0.0..=1.0).contains(&acc));
            (dir, path)
        })
        .1
}

#[test]
fn help_lists_flags_and_defaults() {
    let cases: [(&str, &[&str]); 5] = [
        (
            "train-tagger",
            &[
                "--corpus",
                "--epochs",
                "[default: 5]",
                "--seed",
                "--out",
                "--dev",
            ],
        ),
        ("tag", &["--model", "--in", "--out"]),
        ("eval", &["--model", "--corpus"]),
        (
            "augment",
            &[
                "--strategy",
                "--alpha",
                "[default: 0.2]",
                "--eda-alpha",
                "[default: 0.1]",
                "--n-aug",
                "--no-append-original",
                "--format",
                "--schema",
                "--classes",
            ],
        ),
        (
            "compare",
            &[
                "--warmup-epochs",
                "[default: 2]",
                "--epochs",
                "[default: 5]",
                "--batch-size",
                "[default: 32]",
                "--valid-fraction",
                "--report",
            ],
        ),
    ];
    for (cmd, needles) in cases {
        let out = run(&[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = stdout(&out);
        for n in needles {
            assert!(text.contains(n), "{cmd} --help lacks {n}:\n{text}");
        }
    }
}

#[test]
fn bad_usage_exits_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["augment", "--bogus"]).status.code(), Some(1));
}

#[test]
fn missing_corpus_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.conllu");
    let out = run(&[
        "train-tagger",
        "--corpus",
        s(&missing),
        "--out",
        s(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope.conllu"));
    assert!(!dir.path().join("m").exists());
}

#[test]
fn zero_epochs_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "train-tagger",
        "--corpus",
        s(&data("en-dev.conllu")),
        "--epochs",
        "0",
        "--out",
        s(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("epochs must be positive"));
}

#[test]
fn eda_without_lexicon_creates_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("out.jsonl");
    let out = run(&[
        "augment",
        "--in",
        s(&data("rt-polarity-test.jsonl")),
        "--strategy",
        "eda",
        "--out",
        s(&dest),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("eda requires --lexicon"));
    assert!(!dest.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_strategy_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "compare",
        "--train",
        s(&data("rt-polarity-test.jsonl")),
        "--strategies",
        "adverb_delete,shuffle",
        "--model",
        s(model()),
        "--report",
        s(&dir.path().join("r.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("adverb_delete, eda, aeda, softeda"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn warmup_beyond_epochs_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "compare",
        "--train",
        s(&data("rt-polarity-test.jsonl")),
        "--strategies",
        "aeda",
        "--warmup-epochs",
        "6",
        "--epochs",
        "5",
        "--report",
        s(&dir.path().join("r.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn augment_reproduces_first_golden_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    std::fs::write(
        &input,
        concat!(
            "{\"text\": \"The film is strictly routine.\", \"label\": 0}\n",
            "{\"text\": \"The cat sat.\", \"label\": 1}\n",
            "{\"text\": \"It was really good.\", \"label\": 1}\n",
            "{\"text\": \"A dull film.\", \"label\": 0}\n",
        ),
    )
    .unwrap();
    let dest = dir.path().join("out.jsonl");
    let out = run(&[
        "augment",
        "--in",
        s(&input),
        "--strategy",
        "adverb_delete",
        "--model",
        s(model()),
        "--out",
        s(&dest),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&dest).unwrap();
    assert!(text.contains("\"The film is routine.\""), "{text}");
    let report = stdout(&out);
    assert!(report.contains("inputs: 4"), "{report}");
    assert!(report.contains("skipped: 2"), "{report}");
    assert!(report.contains("emitted: 6"), "{report}");
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["provenance"].is_string());
    }
}

#[test]
fn compare_single_strategy_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = run(&[
        "compare",
        "--train",
        s(&data("rt-polarity-test.jsonl")),
        "--strategies",
        "adverb_delete",
        "--model",
        s(model()),
        "--report",
        s(&report),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let runs = v["runs"].as_array().unwrap();
    let names: Vec<&str> = runs
        .iter()
        .map(|r| r["strategy"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["no_aug", "adverb_delete"]);
    for r in runs {
        let acc = r["accuracy"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&acc));
        assert_eq!(r["seed"].as_u64(), Some(0));
        assert!(r["schedule"]["total_epochs"].as_u64() == Some(5));
    }
    assert!(stdout(&out).contains("train: 800 examples, test: 200 examples"));
}

#[test]
fn tag_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    std::fs::write(&input, "The film is strictly routine.\n\nPerhaps not.\n").unwrap();
    let out = run(&["tag", "--model", s(model()), "--in", s(&input)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("strictly/ADV"), "{}", lines[0]);
    assert!(lines[0].ends_with("./PUNCT"));

    let conllu = dir.path().join("s.conllu");
    let out = run(&[
        "tag",
        "--model",
        s(model()),
        "--in",
        s(&input),
        "--out",
        s(&conllu),
    ]);
    assert!(out.status.success());
    let out = run(&["eval", "--model", s(model()), "--corpus", s(&conllu)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("token accuracy: 1.0000"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn corrupt_model_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    std::fs::write(&bad, "advaug-tagger\t9\tADV,X\n").unwrap();
    let out = run(&[
        "eval",
        "--model",
        s(&bad),
        "--corpus",
        s(&data("en-dev.conllu")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported model version"));
}
