use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsat")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn closure_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star", "4 2\n0 1\n0 2\n0 3\n");
    let single = write(dir.path(), "single", "4 2\n0 1\n");
    let full = write(dir.path(), "full", "3 2\n0 1\n0 2\n1 2\n");

    let out = wsat(&["closure", &star, "--pattern", "K3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("steps 3\n"));
    assert_eq!(wsat(&["closure", &single, "--pattern", "K3"]).status.code(), Some(1));
    let out = wsat(&["closure", &full, "--pattern", "K4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("steps 0\n"));
}

#[test]
fn format_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad", "4 2\n0 1\n# comment\n2 2\n");
    let out = wsat(&["closure", &bad, "--pattern", "K3"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    let hyper = write(dir.path(), "hyper", "4 3\n0 1 2\n");
    let out = wsat(&["closure", &hyper, "--pattern", "K3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("uniformity"));
}

#[test]
fn solver_values() {
    for (args, value) in [(["wsat", "5", "K3", "--exact"], "4"), (["wsat", "5", "K4^3", "--exact"], "6"), (["wsat", "4", "edge^2", "--exact"], "0")] {
        let out = wsat(&args);
        assert_eq!(out.status.code(), Some(0));
        let first = stdout(&out).lines().next().unwrap().to_string();
        let fields: Vec<&str> = first.split_whitespace().collect();
        assert_eq!(fields.len(), 6, "{first}");
        assert_eq!(fields[4], value, "{first}");
        assert_eq!(fields[5], "exact");
        assert_eq!(fields[3].len(), 16);
    }
}

#[test]
fn budget_exhaustion_exits_two() {
    let out = wsat(&["wsat", "6", "K4", "--exact", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("inconclusive above m = "));
}

#[test]
fn generate_examples() {
    let out = wsat(&["generate", "clique-extremal", "5", "3", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("#BOUND clique_wsat_value 4 4 holds"));
    assert!(text.contains("5 2\n0 1\n0 2\n0 3\n0 4\n"));

    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();
    assert_eq!(wsat(&["--output", o, "generate", "percolate", "--r", "2", "--s", "2", "--h", "3", "--l", "3", "--t", "3"]).status.code(), Some(0));
    for name in ["percolate_e1.graph", "percolate_e2.graph", "percolate.report", "percolate.cert"] {
        assert!(out_dir.join(name).is_file(), "{name}");
    }
    let report = fs::read_to_string(out_dir.join("percolate.report")).unwrap();
    assert!(report.contains("#BOUND percolate_e2 18 36 holds"));

    // regenerated graphs re-run through `closure` keep their verdict
    let g = out_dir.join("percolate.graph");
    assert_eq!(wsat(&["closure", g.to_str().unwrap(), "--template", "3", "2"]).status.code(), Some(0));
    assert_eq!(wsat(&["closure", g.to_str().unwrap(), "--pattern", "K3"]).status.code(), Some(0));

    assert_eq!(wsat(&["--output", o, "generate", "cover", "6", "3", "2"]).status.code(), Some(0));
    assert!(fs::read_to_string(out_dir.join("cover.cover")).unwrap().starts_with("6 3 2\n"));
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star", "4 2\n0 1\n0 2\n0 3\n");
    let o = dir.path().join("o");
    wsat(&["--output", o.to_str().unwrap(), "closure", &star, "--pattern", "K3"]);
    let cert = o.join("closure.cert");
    let cert_s = cert.to_str().unwrap();
    assert_eq!(wsat(&["verify", &star, cert_s, "--pattern", "K3"]).status.code(), Some(0));

    let text = fs::read_to_string(&cert).unwrap();
    let tampered: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 2 { l.replace("2->0", "2->2") } else { l.to_string() })
        .collect();
    let bad = write(dir.path(), "bad.cert", &(tampered.join("\n") + "\n"));
    let out = wsat(&["verify", &star, &bad, "--pattern", "K3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("invalid step 1:"));

    let g = dir.path().join("g");
    wsat(&["--output", g.to_str().unwrap(), "generate", "cone", "--r", "2", "--h", "3", "--s", "2", "--a", "4", "--b", "2"]);
    let graph = g.join("cone.graph");
    let tcert = g.join("cone.cert");
    let (graph, tcert) = (graph.to_str().unwrap(), tcert.to_str().unwrap());
    assert_eq!(wsat(&["verify", graph, tcert, "--template", "3", "2"]).status.code(), Some(0));
    assert_eq!(wsat(&["verify", graph, tcert, "--pattern", "K3"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(wsat(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(wsat(&["wsat", "x", "K3"]).status.code(), Some(64));
    assert_eq!(wsat(&["closure", "g"]).status.code(), Some(64));
    assert_eq!(wsat(&["--help"]).status.code(), Some(0));
    assert_eq!(wsat(&["--version"]).status.code(), Some(0));
}
