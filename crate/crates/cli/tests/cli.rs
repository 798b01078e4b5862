//! End-to-end tests of the binary: exit codes, formats, reports, and the
//! reduction round trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cardsat"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn payload(out: &Output) -> serde_json::Value {
    let report: serde_json::Value = serde_json::from_str(&stdout(out)).unwrap();
    report["payload"].clone()
}

#[test]
fn cardminsat_answers_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.cnf", "p cnf 3 2\n1 2 0\n2 3 0\n");

    let out = bin().arg("cardminsat").arg(&f).args(["--query", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("true\noptimum 1\n"));

    let out = bin().arg("cardminsat").arg(&f).args(["--query", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("false\n"));

    let unsat = write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = bin().arg("cardminsat").arg(&unsat).args(["--query", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("unsat"));

    // Malformed file: exit 2 with a line-numbered message.
    let bad = write(dir.path(), "bad.cnf", "p cnf 1 1\n2 0\n");
    let out = bin().arg("cardminsat").arg(&bad).args(["--query", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn json_reports_are_deterministic_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.cnf", "p cnf 3 2\n1 2 0\n2 3 0\n");
    let run = || {
        let out = bin()
            .arg("cardminsat")
            .arg(&f)
            .args(["--query", "2", "--json"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        report
    };
    let a = run();
    let b = run();
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["inputs"], b["inputs"]);
    assert_eq!(a["oracle_calls"], b["oracle_calls"]);
    assert_eq!(a["payload"]["witness"], serde_json::json!("010"));
}

#[test]
fn cardmaxsat_and_lexmaxsat() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.cnf", "p cnf 2 1\n-1 -2 0\n");
    let out = bin().arg("cardmaxsat").arg(&f).args(["--query", "1", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&out)["optimum"], serde_json::json!(1));

    let g = write(dir.path(), "g.cnf", "p cnf 2 1\n-1 2 0\n");
    let out = bin().arg("lexmaxsat").arg(&g).args(["--order", "1,2", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&out)["model"], serde_json::json!("11"));

    // Partial order gives the prefix answer.
    let h = write(dir.path(), "h.cnf", "p cnf 3 2\n-1 0\n-2 0\n");
    let out = bin().arg("lexmaxsat").arg(&h).args(["--order", "1,2", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(payload(&out)["prefix"], serde_json::json!("00"));
}

#[test]
fn reduction_chain_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    // Negative Krom: two vertices, one edge.
    let f = write(dir.path(), "neg.cnf", "p cnf 2 1\n-1 -2 0\n");
    let out_prefix = dir.path().join("dup");
    let out = bin()
        .args(["reduce", "--from", "cardmaxsat", "--to", "cardminsat"])
        .arg(&f)
        .args(["--query", "1", "--out"])
        .arg(&out_prefix)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let produced = std::fs::read_to_string(dir.path().join("dup.cnf")).unwrap();
    assert!(produced.contains("c query 1"));
    let map = std::fs::read_to_string(dir.path().join("dup.map")).unwrap();
    assert!(map.contains("1 1"));

    // The produced positive-Krom instance answers the dual question.
    let out = bin()
        .arg("cardminsat")
        .arg(dir.path().join("dup.cnf"))
        .args(["--query", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0)); // x1 is in a max model of the source

    // Triangle gadget to a graph file, then bound elimination.
    let tri_src = write(dir.path(), "src.cnf", "p cnf 2 1\n1 2 0\n");
    let out = bin()
        .args(["reduce", "--from", "cardmaxsat", "--to", "maxindset"])
        .arg(&tri_src)
        .args(["--query", "1", "--out"])
        .arg(dir.path().join("tri"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let graph_text = std::fs::read_to_string(dir.path().join("tri.graph")).unwrap();
    assert!(graph_text.starts_with("p edge 11 "));
    assert!(graph_text.contains("k 3"));

    let out = bin()
        .args(["reduce", "--from", "maxindset-bounded", "--to", "maxindset"])
        .arg(dir.path().join("tri.graph"))
        .args(["--out"])
        .arg(dir.path().join("nobound"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let unbounded = std::fs::read_to_string(dir.path().join("nobound.graph")).unwrap();
    assert!(!unbounded.contains("k "));

    let out = bin()
        .args(["reduce", "--from", "maxindset", "--to", "cardmaxsat"])
        .arg(dir.path().join("nobound.graph"))
        .args(["--out"])
        .arg(dir.path().join("back"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("back.cnf").exists());

    // Loglex to cardmax needs an order instead of a query.
    let out = bin()
        .args(["reduce", "--from", "loglexmaxsat", "--to", "cardmaxsat"])
        .arg(&tri_src)
        .args(["--order", "1,2", "--out"])
        .arg(dir.path().join("loglex"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // Unsupported pair.
    let out = bin()
        .args(["reduce", "--from", "cardminsat", "--to", "maxindset"])
        .arg(&tri_src)
        .args(["--query", "1", "--out"])
        .arg(dir.path().join("nope"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn revise_brute_force_and_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let psi = write(dir.path(), "psi.cnf", "p cnf 2 2\n1 0\n2 0\n");
    let mu = write(dir.path(), "mu.cnf", "p cnf 2 1\n-1 0\n");
    let out = bin()
        .arg("revise")
        .arg(&psi)
        .arg(&mu)
        .args(["--op", "dalal", "--task", "mc", "--model", "01", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(payload(&out)["delta_min"], serde_json::json!(1));

    let out = bin()
        .arg("revise")
        .arg(&psi)
        .arg(&mu)
        .args(["--op", "satoh", "--task", "imp", "--query", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0)); // x2 in every selected model

    // A model that does not satisfy mu is a usage error.
    let out = bin()
        .arg("revise")
        .arg(&psi)
        .arg(&mu)
        .args(["--op", "dalal", "--task", "mc", "--model", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Satoh beyond the enumeration cap is refused with exit 3.
    let big_psi = write(dir.path(), "big_psi.cnf", "p cnf 23 1\n1 0\n");
    let big_mu = write(dir.path(), "big_mu.cnf", "p cnf 23 1\n-1 0\n");
    let out = bin()
        .arg("revise")
        .arg(&big_psi)
        .arg(&big_mu)
        .args(["--op", "satoh", "--task", "imp", "--query", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // Dalal lifts the cap through the oracle mode.
    let out = bin()
        .arg("revise")
        .arg(&big_psi)
        .arg(&big_mu)
        .args(["--op", "dalal", "--task", "imp", "--query", "1", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(payload(&out)["answer"], serde_json::json!(false));
}

#[test]
fn abduce_preorders() {
    let dir = tempfile::tempdir().unwrap();
    let pap = write(
        dir.path(),
        "p.pap",
        "vars 3\nhyp 1 2\nman 3\n-1 3 0\n-2 3 0\n",
    );
    for preorder in ["card", "subset", "any"] {
        let out = bin()
            .arg("abduce")
            .arg(&pap)
            .args(["--query", "1", "--preorder", preorder])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "preorder {preorder}");
    }
    let out = bin().arg("abduce").arg(&pap).args(["--query", "1", "--json"]).output().unwrap();
    assert_eq!(payload(&out)["min_size"], serde_json::json!(1));

    // Inconsistent theory is rejected as a format/usage error.
    let bad = write(dir.path(), "bad.pap", "vars 1\nhyp 1\nman 1\n1 0\n-1 0\n");
    let out = bin().arg("abduce").arg(&bad).args(["--query", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_languages() {
    let dir = tempfile::tempdir().unwrap();
    let or2 = write(dir.path(), "or2.rels", "r 2 OR2\n01\n10\n11\n");
    let out = bin().arg("classify").arg(&or2).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Theta2-complete\n");

    let w2a = write(dir.path(), "w2a.rels", "r 2 EQ\n00\n11\nr 2 NEQ\n01\n10\n");
    let out = bin().arg("classify").arg(&w2a).arg("--json").output().unwrap();
    assert_eq!(payload(&out)["verdict"], serde_json::json!("polynomial"));

    let or3 = write(
        dir.path(),
        "or3.rels",
        "r 3\n001\n010\n011\n100\n101\n110\n111\n",
    );
    let out = bin().arg("classify").arg(&or3).arg("--explain").output().unwrap();
    assert!(stdout(&out).starts_with("outside-scope\n"));
}

#[test]
fn external_backend_plumbing() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    // A fake solver that always reports unsatisfiable: fine for an
    // unsatisfiable instance, and exercises the DIMACS pipe.
    let fake = write(dir.path(), "fake.sh", "#!/bin/sh\ncat > /dev/null\necho 's UNSATISFIABLE'\n");
    std::fs::set_permissions(&fake, std::fs::Permissions::from_mode(0o755)).unwrap();
    let unsat = write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = bin()
        .arg("cardminsat")
        .arg(&unsat)
        .args(["--query", "1", "--backend"])
        .arg(fake.display().to_string())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("unsat"));

    // A missing solver is a usage error.
    let out = bin()
        .arg("cardminsat")
        .arg(&unsat)
        .args(["--query", "1", "--backend", "/nonexistent/solver"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn xcheck_quick_passes() {
    let out = bin().args(["xcheck", "--quick", "--seed", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("cardopt-exhaustive-krom: pass"));
    assert!(text.contains("all suites passed"));

    // Same seed, same counts.
    let again = bin().args(["xcheck", "--quick", "--seed", "5", "--json"]).output().unwrap();
    let report: serde_json::Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(report["payload"]["passed"], serde_json::json!(true));
}
