use std::path::Path;
use std::process::{Command, Output};

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

fn welded(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_welded")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_trefoil(dir: &Path) -> String {
    let path = dir.join("trefoil.json");
    std::fs::write(&path, welded::pd::trefoil().to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn reduce_examples() {
    let o = welded(&["reduce", "O1+ U1+"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "code \nn=0\n");

    let o = welded(&["reduce", TREFOIL]);
    assert_eq!(stdout(&o), format!("code {TREFOIL}\nn=3\n"));

    let o = welded(&["reduce", "O1+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("LabelCountMismatch"));

    let o = welded(&["reduce", "--emit-trace", "O1+ O2+ U1+ U2+"]);
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().starts_with("C1_remove"));
    assert!(text.lines().skip(2).all(|l| l.contains(" | ") || l.ends_with(" |")));
}

#[test]
fn unknot_examples() {
    let text = stdout(&welded(&["unknot", TREFOIL]));
    assert!(text.contains("size 1\n"));
    for code in ["", "O1+ O2+ U1+ U2+"] {
        let o = welded(&["unknot", code]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("change_set {}\n"));
    }
}

#[test]
fn bound_examples() {
    let text = stdout(&welded(&["bound", TREFOIL]));
    assert!(text.contains("bound 1\n"));
    assert!(text.contains("check 1 ≤ 1: OK"));
    assert!(stdout(&welded(&["bound", "O1+ U1+"])).contains("bound 0\n"));
    assert_eq!(welded(&["bound", ""]).status.code(), Some(3));
}

#[test]
fn trivial_and_u() {
    let o = welded(&["trivial", "O1+ O2+ U1+ U2+"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("CERTIFIED"));

    let o = welded(&["trivial", TREFOIL, "--max-states", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("UNKNOWN"));
    assert!(text.contains("limits max_chords=n+2 max_states=1000 max_depth=64"));

    let text = stdout(&welded(&["u", TREFOIL]));
    assert!(text.starts_with("u ≤ 1\n"));
    assert!(text.contains("exhaustive_below true"));
}

#[test]
fn enumerate_counts() {
    assert_eq!(stdout(&welded(&["enumerate", "--chords", "2"])).lines().count(), 48);
    assert_eq!(stdout(&welded(&["enumerate", "--chords", "1", "--dedup"])).lines().count(), 2);
}

#[test]
fn pd_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_trefoil(dir.path());
    let o = welded(&["pd2gauss", &file]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).split_whitespace().count(), 6);

    let listing = stdout(&welded(&["pd-apply", &file, "--move", "delta"]));
    assert_eq!(listing.lines().count(), 2);
    let site = listing.lines().next().unwrap().split(" plain").next().unwrap().splitn(3, ' ').nth(2).unwrap().to_string();
    let o = welded(&["pd-apply", &file, "--move", "delta", "--site", &site]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let after = dir.path().join("after.json");
    std::fs::write(&after, stdout(&o)).unwrap();
    assert!(welded(&["pd2gauss", after.to_str().unwrap()]).status.success());

    assert_eq!(welded(&["pd-apply", &file, "--move", "delta", "--site", "face 9:9"]).status.code(), Some(3));
    assert_eq!(welded(&["pd-apply", &file, "--move", "nope"]).status.code(), Some(2));
    assert_eq!(welded(&["pd2gauss", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn search_pair_writes_both_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pair");
    let o = welded(&["search-pair", "--move", "delta", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("move Delta"));
    assert_eq!(text.matches("TRIVIAL").count(), 2);
    for name in ["before.json", "after.json"] {
        let f = out.join(name);
        assert!(welded(&["pd2gauss", f.to_str().unwrap()]).status.success());
    }
}

#[test]
fn output_is_deterministic() {
    let a = welded(&["search-pair", "--move", "sharp"]);
    let b = welded(&["search-pair", "--move", "sharp"]);
    assert_eq!(a.stdout, b.stdout);
}
