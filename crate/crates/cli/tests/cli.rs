use std::path::PathBuf;
use std::process::{Command, Output};

fn cardlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cardlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn counting_suite_passes() {
    let o = cardlab(&["verify", "--suite", "mostowski-counting", "--max-support", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
    assert!(text.contains("2048 sets supported by 5 points"));
}

#[test]
fn emitted_witness_verifies() {
    let path = scratch("sort.json");
    let p = path.to_str().unwrap();
    let o = cardlab(&["refute", "fin-to-seq", "--model", "fraenkel", "--oracle", "sort", "--emit-witness", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cardlab(&["verify-witness", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // reverse the moved answer so that the map commutes with the swap
    let mut file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let w = &mut file["certificate"]["witness"];
    assert_eq!(w["kind"], "equivariance_break");
    let tuple = w["moved_answer"]["hf"]["tuple"].as_array_mut().unwrap();
    tuple.reverse();
    let bad = scratch("tampered.json");
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let o = cardlab(&["verify-witness", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn vc_table_lists_the_chain() {
    let o = cardlab(&["table", "--model", "vc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Seq(m) < Pow(m) < seq(m)"), "{}", stdout(&o));
}

#[test]
fn inconsistent_facts_fail() {
    let o = cardlab(&["table", "--fact", "Pow(m) <= Seq(m)", "--fact", "Seq(m) = seq(m)", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["ok"], false);
    assert_eq!(report["checks"][0]["data"]["replays"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["refute", "fin-to-seq", "--oracle", "nope"][..],
        &["refute", "fin-to-seq", "--model", "vp", "--oracle", "sort"],
        &["verify", "--max-atoms", "99"],
        &["verify", "--suite", "nonsense"],
        &["extract", "partition", "--oracle", "fresh", "-T", "0"],
        &["table"],
        &["verify-witness", "/no/such/file.json"],
    ] {
        assert_eq!(cardlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--suite", "equivariance", "--probes", "20", "--seed", "7", "--json"];
    let (a, b) = (cardlab(&args), cardlab(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["schema"], "cardlab-report/1");
    let ids: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn scripted_table_oracle() {
    let path = scratch("table.json");
    let table = r#"{"support": [{"pure": 0}], "entries": [], "default": {"hf": {"tuple": [{"atom": {"pure": 0}}]}}}"#;
    std::fs::write(&path, table).unwrap();
    let o = cardlab(&["refute", "fin-to-seq", "--table", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][0]["data"]["witness"], "injectivity collapse");
}

#[test]
fn extractors_run_at_length_100() {
    for (problem, oracle, outcome) in [
        ("partition", "fresh", "stream"),
        ("partition", "constant", "collapse"),
        ("surplus", "shift", "stream"),
        ("fin-to-atom", "max", "collapse"),
    ] {
        let o = cardlab(&["extract", problem, "--oracle", oracle, "-T", "100", "--n", "2", "--json"]);
        assert_eq!(o.status.code(), Some(0), "{problem} {oracle}: {}", stdout(&o));
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(report["checks"][0]["data"]["outcome"], outcome);
    }
}

#[test]
fn seq_to_power_reports_its_counts() {
    let o = cardlab(&["refute", "seq-to-power", "--oracle", "atoms", "--support", "0,1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][0]["data"]["seq_count"], "65");
    assert_eq!(report["checks"][0]["data"]["supported_count"], "32");
}

#[test]
fn counts_supports() {
    let o = cardlab(&["count-supports", "--structure", "dense", "--size", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][0]["data"]["supported"], "128");
    assert_eq!(report["checks"][0]["data"]["least"], "54");
}
