use std::process::{Command, Output};

fn mixforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixforge"))
        .args(args)
        .env_remove("MIXFORGE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout is JSON lines"))
        .collect()
}

#[test]
fn member_exit_codes() {
    let yes = mixforge(&["member", "-n", "2", "abAB"]);
    assert_eq!(yes.status.code(), Some(0));
    let r = &json_lines(&yes)[0];
    assert_eq!(r["member"], true);
    assert_eq!(r["displacement"], serde_json::json!([0, 0]));

    let no = mixforge(&["member", "-n", "2", "ab"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(
        json_lines(&no)[0]["displacement"],
        serde_json::json!([1, 1])
    );

    assert_eq!(
        mixforge(&["member", "abbAbaBaBBBAbA"]).status.code(),
        Some(0)
    );
    assert_eq!(mixforge(&["member", "abz"]).status.code(), Some(2));
    assert_eq!(
        mixforge(&["member", "-n", "2", "cC"]).status.code(),
        Some(2)
    );
}

#[test]
fn derive_pairs_and_triples() {
    let o = mixforge(&["derive", "-n", "2", "ab", "BA"]);
    assert_eq!(o.status.code(), Some(0));
    let tree = &json_lines(&o)[0];
    assert_eq!(tree["rule"], "pair");
    assert_eq!(tree["children"][0]["children"][0]["rule"], "axiom");
    assert_eq!(tree["yield"], serde_json::json!(["ab", "BA"]));

    let axiom = mixforge(&["derive", "-n", "2", "", ""]);
    assert_eq!(json_lines(&axiom)[0]["rule"], "axiom");

    let o3 = mixforge(&["derive", "-n", "3", "aAbBcC", ""]);
    assert_eq!(o3.status.code(), Some(0));
    assert_eq!(
        json_lines(&o3)[0]["yield"],
        serde_json::json!(["aAbBcC", "", ""])
    );

    assert_eq!(mixforge(&["derive", "ab", "AA"]).status.code(), Some(1));
    assert_eq!(mixforge(&["derive", "a", "b", "c"]).status.code(), Some(2));
}

#[test]
fn sweeps() {
    let o = mixforge(&["sweep", "-n", "2", "--max-len", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["words"], 1);

    let o = mixforge(&["sweep", "-n", "2", "--max-len", "6"]);
    let r = &json_lines(&o)[0];
    assert_eq!(r["words"], 1 + 4 + 36 + 400);
    assert_eq!(r["failures"], serde_json::json!([]));

    let alt = mixforge(&[
        "sweep",
        "-n",
        "3",
        "--max-len",
        "6",
        "--mode",
        "alternating",
    ]);
    assert_eq!(alt.status.code(), Some(0));
    let r = &json_lines(&alt)[0];
    assert_eq!(r["alternating"][3]["allow_empty"], 1860);

    let bad = mixforge(&[
        "sweep",
        "-n",
        "2",
        "--max-len",
        "4",
        "--mode",
        "alternating",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_does_not_depend_on_workers() {
    let args = |w: &'static str| ["--workers", w, "sweep", "-n", "2", "--max-len", "6"];
    let one = mixforge(&args("1"));
    let four = mixforge(&args("4"));
    assert_eq!(one.stdout, four.stdout);
    let s1 = mixforge(&[
        "--workers",
        "1",
        "sweep",
        "-n",
        "2",
        "--max-len",
        "8",
        "--sample",
        "20",
        "--seed",
        "3",
    ]);
    let s3 = mixforge(&[
        "--workers",
        "3",
        "sweep",
        "-n",
        "2",
        "--max-len",
        "8",
        "--sample",
        "20",
        "--seed",
        "3",
    ]);
    assert_eq!(s1.stdout, s3.stdout);
    assert_eq!(json_lines(&s1)[0]["seed"], 3);
}

#[test]
fn enumerate_reports_equality() {
    let o = mixforge(&["enumerate", "-n", "2", "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert_eq!(r["equal"], true);
    let sizes: Vec<u64> = r["by_length"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["language"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, [1, 4, 36, 400]);

    let o3 = mixforge(&["enumerate", "-n", "3", "--max-len", "4"]);
    assert_eq!(json_lines(&o3)[0]["closure_in_language"], true);
}

#[test]
fn cap_precedence() {
    let env_only = Command::new(env!("CARGO_BIN_EXE_mixforge"))
        .args(["enumerate", "-n", "2", "--max-len", "6"])
        .env("MIXFORGE_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(env_only.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_mixforge"))
        .args(["--cap", "5000", "enumerate", "-n", "2", "--max-len", "6"])
        .env("MIXFORGE_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
    assert_eq!(
        mixforge(&["--cap", "10", "sweep", "-n", "2", "--max-len", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn complex_checks_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("complex.json");
    let o = mixforge(&["complex", "--links", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert!(lines
        .iter()
        .filter(|l| l.get("pass").is_some())
        .all(|l| l["pass"] == true));
    let p1 = lines.iter().find(|l| l["base"] == "p1").unwrap();
    assert_eq!(p1["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(p1["edges"].as_array().unwrap().len(), 8);
    let golden = include_str!("../../core/tests/golden/complex.json");
    assert_eq!(std::fs::read_to_string(dump).unwrap(), golden);
}

#[test]
fn render_figures() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("fig1.svg");
    let o = mixforge(&["render", "abbAbaBaBBBAbA", "--out", plain.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&plain).unwrap();
    assert_eq!(svg.matches("marker-end").count(), 14);

    let witness = dir.path().join("witness.json");
    let d = mixforge(&[
        "derive",
        "abbAbaB",
        "aBBBAbA",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(d.status.code(), Some(0));
    let coloured = dir.path().join("split.svg");
    let o = mixforge(&[
        "render",
        "abbAbaBaBBBAbA",
        "--out",
        coloured.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&coloured).unwrap();
    assert!(svg.contains(">q</text>"));
    assert!(svg.contains("#1f77b4"));

    let empty = dir.path().join("empty.svg");
    mixforge(&["render", "", "--out", empty.to_str().unwrap()]);
    assert_eq!(
        std::fs::read_to_string(&empty)
            .unwrap()
            .matches("<circle")
            .count(),
        1
    );

    let wrong = mixforge(&[
        "render",
        "abAB",
        "--out",
        empty.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(wrong.status.code(), Some(2));
}
