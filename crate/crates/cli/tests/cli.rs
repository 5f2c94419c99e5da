//! End-to-end checks of the command surface and its exit codes.

use std::process::{Command, Output};

fn twonest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twonest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn nested_golden_and_verdicts() {
    let o = twonest(&["nested", "4", "28", "--format", "machine"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("nested v1 m1=4 m2=28 m=32 t=0 case=1 cw=6 fw=18"));
    assert!(text.contains("positions 1 5 7 13"));
    assert!(text.contains(
        "phi 0 32 1 31 2 30 3 29 4 28 5 27 6 26 7 24 8 23 9 22 10 21 11 20 12 19 14 18"
    ));
    assert!(text.contains("verdict graceful"));

    let o = twonest(&["nested", "4", "30"]);
    assert!(stdout(&o).contains("near-graceful"));
}

#[test]
fn nested_below_bound_exits_3() {
    let o = twonest(&["nested", "3", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_error_exits_2() {
    let o = twonest(&["nested", "four", "28"]);
    assert_eq!(o.status.code(), Some(2));
    let o = twonest(&["snowflake", "3,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn snowflake_provenances() {
    let o = twonest(&["snowflake", "3,3,3,3,3,3", "--format", "machine"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("labeling v1 M=18 k=0 t=1"));
    assert!(text.contains("provenance zero-sum"));

    let o = twonest(&["snowflake", "4,4", "--format", "machine"]);
    assert!(stdout(&o).contains("provenance even"));

    let o = twonest(&["snowflake", "3,3", "--format", "machine"]);
    let text = stdout(&o);
    assert!(text.contains("t=1"));
    assert!(text.contains("provenance search"));
}

#[test]
fn construct_outputs_reverify() {
    let dir = std::env::temp_dir().join("twonest-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    let lab = dir.join("lab.txt");
    let o = twonest(&[
        "snowflake",
        "7,8,9",
        "--format",
        "machine",
        "--out",
        lab.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = twonest(&["verify", lab.to_str().unwrap(), "conservative"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));

    // A tampered label must fail with a witness and exit 1.
    let text = std::fs::read_to_string(&lab).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let last = lines.last_mut().unwrap();
    let mut parts: Vec<String> = last.split_whitespace().map(String::from).collect();
    let bumped: u64 = parts[2].parse::<u64>().unwrap() + 1;
    parts[2] = bumped.to_string();
    *last = parts.join(" ");
    let tampered = dir.join("tampered.txt");
    std::fs::write(&tampered, lines.join("\n") + "\n").unwrap();
    let o = twonest(&["verify", tampered.to_str().unwrap(), "conservative"]);
    assert_eq!(o.status.code(), Some(1));

    let nested = dir.join("nested.txt");
    let o = twonest(&[
        "nested",
        "3",
        "16",
        "--format",
        "machine",
        "--out",
        nested.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = twonest(&["verify", nested.to_str().unwrap(), "graceful"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn semidual_profile_and_induction() {
    let o = twonest(&["semidual", "3", "16", "--format", "machine"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("profile 5 3 11"));

    let o = twonest(&["semidual", "3", "16", "--induce", "--format", "machine"]);
    let text = stdout(&o);
    assert!(text.contains("labeling v1 M=19 k=0 t=0"));
}

#[test]
fn skolem_pairing_and_none() {
    let o = twonest(&["skolem", "6", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(1,5)"));

    let o = twonest(&["skolem", "3", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "none");
}

#[test]
fn search_tristate_exit_codes() {
    // Verified absence exits 1.
    let o = twonest(&["search", "conservative", "snowflake:3,3", "--t", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("none"));

    // A hit exits 0 and prints a record.
    let o = twonest(&["search", "graceful", "cycle:4", "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found"));
}

#[test]
fn campaign_writes_records_and_witnesses() {
    let dir = std::env::temp_dir().join("twonest-campaign-test");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let list = dir.join("instances.txt");
    std::fs::write(
        &list,
        "# comment line\n\
         s1 skolem 6 1\n\
         g1 graceful cycle:5 0\n\
         c1 conservative snowflake:3,4 0 0\n",
    )
    .unwrap();
    let out_dir = dir.join("out");
    let o = twonest(&[
        "campaign",
        list.to_str().unwrap(),
        "--workers",
        "2",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let records = stdout(&o);
    assert!(records.lines().count() == 3);
    assert!(records.contains("s1 found"));
    assert!(records.contains("g1 none"));
    assert!(records.contains("c1 found"));
    assert!(out_dir.join("s1.witness").exists());
    assert!(out_dir.join("c1.witness").exists());
    assert!(!out_dir.join("g1.witness").exists());
}
