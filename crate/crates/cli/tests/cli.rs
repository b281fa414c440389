use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const RUNNING: &str = "world alpha\nworld beta\nworld gamma\nedge alpha beta\nedge alpha gamma\nedge beta gamma\n";

const GRAPH: &str = "edge(a,b).\n\
                     edge(Y,X) :- edge(X,Y).\n\
                     path(X,Y) :- edge(X,Y).\n\
                     path(X,Z) :- edge(X,Y), path(Y,Z).\n\
                     noedge(X,Y) :- path(X,Y), !edge(X,Y).\n";

fn cplkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cplkit")).args(args).env_remove("CPLKIT_SEED").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(TempDir::new().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn prove(logic: &str, frame: &Path, seq: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["prove", "--logic", logic, "--frame", s(frame), "--sequent", s(seq)];
    args.extend_from_slice(extra);
    cplkit(&args)
}

#[test]
fn prove_reports_verdicts_through_exit_codes() {
    let d = Dir::new();
    let f = d.file("run.frame", RUNNING);
    let bot = d.file("bot.seq", "hyp dia q @ alpha\ngoal bot @ alpha\n");
    let q_beta = d.file("qb.seq", "hyp dia q @ alpha\ngoal q @ beta\n");
    for logic in ["cpl", "cpls"] {
        let o = prove(logic, &f, &bot, &[]);
        assert_eq!(code(&o), 0, "{logic}");
        assert_eq!(stdout(&o), "provable\n");
    }
    let o = prove("cpl", &f, &q_beta, &[]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "refuted\n");
}

#[test]
fn malformed_inputs_exit_with_two() {
    let d = Dir::new();
    let cyclic = d.file("cyc.frame", "world a\nworld b\nedge a b\nedge b a\n");
    let f = d.file("run.frame", RUNNING);
    let seq = d.file("s.seq", "goal q @ alpha\n");
    let bad = d.file("bad.seq", "goal q @ delta\n");
    let o = prove("cpl", &cyclic, &seq, &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(code(&prove("cpl", &f, &bad, &[])), 2);
    assert_eq!(code(&prove("cpl", &f, &d.0.path().join("missing.seq"), &[])), 2);
    let cert = d.0.path().join("c.nd");
    assert_eq!(code(&prove("cpls", &f, &seq, &["--certificate", s(&cert)])), 2);
}

#[test]
fn certificates_round_trip_through_check() {
    let d = Dir::new();
    let f = d.file("run.frame", RUNNING);
    let seq = d.file("s.seq", "hyp q @ beta\ngoal dia q @ alpha\n");
    let cert = d.0.path().join("c.nd");
    let o = prove("cpl", &f, &seq, &["--certificate", s(&cert)]);
    assert_eq!(code(&o), 0);
    let term = fs::read_to_string(&cert).unwrap();
    let check = |nd: &Path| {
        cplkit(&["check", "--logic", "cpl", "--frame", s(&f), "--sequent", s(&seq), "--nd", s(nd)])
    };
    let o = check(&cert);
    assert_eq!((code(&o), stdout(&o)), (0, "accepted\n".to_string()));

    assert_eq!(term.trim(), "(dia-i beta (hyp 0))");
    let corrupted = d.file("bad.nd", &term.replace("dia-i", "bot-e"));
    let o = check(&corrupted);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("rejected: "), "{}", stdout(&o));

    let undeclared = d.file("undeclared.nd", "(dia-i delta (hyp 0))\n");
    assert_eq!(code(&check(&undeclared)), 2);
}

#[test]
fn run_saturates_and_queries() {
    let d = Dir::new();
    let p = d.file("graph.dl", GRAPH);
    let o = cplkit(&["run", s(&p), "--query", "noedge(a,a)"]);
    assert_eq!((code(&o), stdout(&o)), (0, "true\n".to_string()));
    let o = cplkit(&["run", s(&p), "--query", "noedge(a,b)"]);
    assert_eq!((code(&o), stdout(&o)), (1, "false\n".to_string()));

    let all = stdout(&cplkit(&["run", s(&p), "--all"]));
    assert_eq!(all.lines().filter(|l| l.ends_with("@gamma")).count(), 6);
    assert_eq!(all.lines().filter(|l| l.ends_with("@beta")).count(), 2);
    assert_eq!(stdout(&cplkit(&["run", s(&p), "--all", "--semi-naive"])), all);

    let paradox = d.file("paradox.dl", &format!("{GRAPH}edge(X,Y) :- path(X,Y), !edge(X,Y).\n"));
    let o = cplkit(&["run", s(&paradox), "--all"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unstratifiable"));
}

#[test]
fn axioms_at_defaults_match_and_are_deterministic() {
    let a = cplkit(&["axioms"]);
    assert_eq!(code(&a), 0);
    let text = stdout(&a);
    let alpha = text.lines().find(|l| l.starts_with("¬◇A⊃□¬A @ alpha")).expect("pinned row");
    assert!(alpha.contains("refuted") && alpha.contains("expected"), "{alpha}");
    assert!(text.ends_with("all verdicts match\n"));
    assert_eq!(stdout(&cplkit(&["axioms"])), text);

    let tiny = cplkit(&["axioms", "--frames", "1", "--max-worlds", "1"]);
    assert_eq!(code(&tiny), 0, "{}", stdout(&tiny));
    assert_eq!(code(&cplkit(&["axioms", "--max-worlds", "0"])), 2);
}

#[test]
fn json_output_is_well_formed() {
    let d = Dir::new();
    let f = d.file("run.frame", RUNNING);
    let seq = d.file("s.seq", "hyp dia q @ alpha\ngoal bot @ alpha\n");
    let o = prove("cpl", &f, &seq, &["--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "provable");
    assert!(v.get("elapsed_ms").is_none());
    let o = prove("cpl", &f, &seq, &["--json", "--timings"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["elapsed_ms"].is_number());

    let p = d.file("graph.dl", GRAPH);
    let v: serde_json::Value = serde_json::from_slice(&cplkit(&["run", s(&p), "--json"]).stdout).unwrap();
    assert_eq!(v["database"].as_array().unwrap().len(), 8);

    let o = cplkit(&["axioms", "--frames", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], code(&o) == 0);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}
