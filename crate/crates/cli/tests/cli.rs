use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tricode(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricode"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests/t3.manifest")
}

#[test]
fn bundled_t3_manifest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let m = bundled();
    let o = tricode(
        &[
            "run-manifest",
            m.to_str().unwrap(),
            "--workdir",
            "work",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 10);
    assert!(dir.path().join("work/t3_hypergraph.json").exists());
}

#[test]
fn perturbed_betti_fails_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(bundled())
        .unwrap()
        .replace("equals = [1, 3, 3, 1]", "equals = [1, 3, 3, 2]");
    std::fs::write(dir.path().join("bad.manifest"), text).unwrap();
    let o = tricode(&["run-manifest", "bad.manifest"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("FAIL betti /betti: expected [1,3,3,2], got [1,3,3,1]"),
        "{out}"
    );
    assert!(out.contains("9 passed, 1 failed"), "{out}");
}

#[test]
fn empty_manifest_passes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.manifest"), "").unwrap();
    let o = tricode(&["run-manifest", "empty.manifest", "--format", "json"], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn manifest_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("missing.manifest"),
        "[[steps]]\nid = \"b\"\ncommand = [\"homology\", \"betti\", \"nope.json\"]\ninputs = [\"nope.json\"]\n",
    )
    .unwrap();
    let o = tricode(&["run-manifest", "missing.manifest"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.json"));

    std::fs::write(dir.path().join("schema.manifest"), "[[step]]\nid = \"x\"\n").unwrap();
    let o = tricode(&["run-manifest", "schema.manifest"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = tricode(&["run-manifest", "absent.manifest"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_manifests_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let m = bundled();
    let run = |w: &str| {
        let o = tricode(
            &["run-manifest", m.to_str().unwrap(), "--workdir", w, "--format", "json"],
            dir.path(),
        );
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("a"), run("b"));
    for f in [
        "t3.json",
        "t3_form.json",
        "t3_code.json",
        "t3_ccz.json",
        "t3_hypergraph.json",
    ] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
        assert_eq!(a.last(), Some(&b'\n'));
    }
}

#[test]
fn json_output_has_sorted_keys() {
    let dir = tempfile::tempdir().unwrap();
    let o = tricode(&["mcg", "thurston", "--n", "n.json", "--word", "A B"], dir.path());
    assert!(!o.status.success());
    std::fs::write(
        dir.path().join("n.json"),
        r#"{"rows":2,"cols":2,"entries":[[8,4],[4,0]]}"#,
    )
    .unwrap();
    let o = tricode(&["mcg", "thurston", "--n", "n.json", "--word", "A B"], dir.path());
    let s = stdout(&o);
    assert!(s.ends_with("}\n"));
    let keys: Vec<&str> = s
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&"stretch_factor"));
}

#[test]
fn reports() {
    let dir = tempfile::tempdir().unwrap();
    let r = |s: &str| stdout(&tricode(&["report", s], dir.path()));
    assert_eq!(r("toric:t3:3"), "n=21 k=9 d_z=1(exact)\n");
    assert_eq!(r("thurston"), "ν≈93.2548 stretch≈91.2439 pA=yes\n");
    assert_eq!(r("hypergraph:t3"), "9 vertices, 6 hyperedges, κ=6\n");
    let o = tricode(&["report", "no-such-subject"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    tricode(&["complex", "build", "--preset", "t3", "--out", "t3.json"], dir.path());
    tricode(
        &["code", "build", "t3.json", "--type", "toric:3", "--out", "code.json"],
        dir.path(),
    );
    assert_eq!(r("code.json"), "n=21 k=9 d_z=1(exact)\n");
}

#[test]
fn mcg_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let o = tricode(
        &[
            "mcg", "twist", "--genus", "2", "--curve", "a:2", "--power", "100", "--out", "t.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = tricode(
        &["mcg", "torus-homology", "--matrix", "t.json", "--format", "text"],
        dir.path(),
    );
    assert_eq!(stdout(&o), "H1 = Z^4 + Z/100, H2 = Z^4\n");
    let o = tricode(
        &[
            "mcg",
            "thickened",
            "--genus",
            "3",
            "--sequence",
            "b:3 b:2 f:2",
            "--format",
            "text",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&o), "CNOT((a(2)xc;1),(b(3)xc;1))\nCNOT((a(3)xc;1),(b(2)xc;1))\n");
}

#[test]
fn sullivan_random_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&tricode(&["sullivan", "random", "--m", "7", "--seed", "9"], dir.path()));
    let b = stdout(&tricode(&["sullivan", "random", "--m", "7", "--seed", "9"], dir.path()));
    assert_eq!(a, b);
    std::fs::write(dir.path().join("mu.json"), &a).unwrap();
    let o = tricode(&["sullivan", "roundtrip", "mu.json", "--format", "text"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "PASS\n");
}

#[test]
fn cz_membrane_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let run = |a: &[&str]| {
        let o = tricode(a, dir.path());
        assert!(o.status.success(), "{a:?}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    run(&["complex", "build", "--preset", "product:2,2", "--out", "p.json"]);
    run(&["code", "build", "p.json", "--type", "toric:3", "--out", "c.json"]);
    run(&[
        "gate",
        "cz",
        "p.json",
        "--membrane",
        "a(1)xc",
        "--copies",
        "1,2",
        "--out",
        "cz.json",
    ]);
    let out = run(&["gate", "action", "cz.json", "c.json", "--format", "text"]);
    assert_eq!(out, "CZ((Sigma_2;1),(b(1)xc;2))\nCZ((b(1)xc;1),(Sigma_2;2))\n");
    run(&["cup", "form", "p.json", "--out", "form.json"]);
    let dot = run(&["hypergraph", "build", "form.json", "--export", "dot"]);
    assert!(dot.starts_with("graph hypergraph {"));
    let degrees = {
        run(&["hypergraph", "build", "form.json", "--out", "h.json"]);
        run(&["hypergraph", "degrees", "h.json", "--format", "text"])
    };
    assert!(degrees.contains("star-like: true"), "{degrees}");
}
