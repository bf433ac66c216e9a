use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hodge_core::SparseMatrix;
use serde_json::Value;
use tempfile::TempDir;

const G1: &str = "p 6 7\n1 2\n2 3\n3 4\n4 1\n3 5\n5 6\n3 6\n";
const G3: &str = "2 1\n1 3\n2 3\n3 4\n4 5\n4 6\n4 7\n";
const G4: &str = "2 1\n1 3\n2 3\n3 4\n4 5\n3 6\n4 7\n";
const C4: &str = "1 2\n2 3\n3 4\n4 1\n";

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn edge_spectrum_of_first_graph() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g1.txt", G1);
    let v = json(&hodge(&["spectrum", "--k", "1", "--input", s(&g)]));
    let r = 5f64.sqrt();
    let want = [0.0, 3.0 - r, 2.0, 3.0, 3.0, 3.0, 3.0 + r];
    let got: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(got.len(), want.len());
    for (a, b) in got.iter().zip(want) {
        // printed to 12 significant digits
        assert!((a - b).abs() < 1e-10, "{got:?}");
    }
    assert_eq!(v["betti"], 1);
    assert_eq!(v["k"], 1);
}

#[test]
fn isospectral_pair_is_not_distinguished() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", G3);
    let b = write(&dir, "b.txt", G4);
    let v = json(&hodge(&["isospectral", "--max-k", "2", s(&a), s(&b)]));
    assert_eq!(v["distinguished"], false);
    assert_eq!(v["distinguished_at"], Value::Null);

    let g1 = write(&dir, "g1.txt", G1);
    let g2 = write(&dir, "g2.txt", "1 2\n2 3\n3 4\n4 1\n3 5\n4 6\n6 2\n");
    let v = json(&hodge(&["isospectral", s(&g1), s(&g2)]));
    assert_eq!(v["distinguished"], true);
    assert_eq!(v["distinguished_at"], 1);
}

#[test]
fn betti_numbers() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.txt", C4);
    let out = hodge(&["betti", "--k", "1", "--input", s(&c4)]);
    assert_eq!(json(&out), serde_json::json!({ "betti": 1 }));
    let g1 = write(&dir, "g1.txt", G1);
    assert_eq!(
        json(&hodge(&["betti", "--input", s(&g1)]))["betti"],
        serde_json::json!([1, 1, 0])
    );
}

#[test]
fn exported_operators_round_trip_exactly() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g1.txt", G1);
    for (kind, k) in [("coboundary", "0"), ("coboundary", "1"), ("adjoint", "0")] {
        let out = hodge(&[
            "operator",
            "--k",
            k,
            "--kind",
            kind,
            "--export",
            "--input",
            s(&g),
        ]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let m = SparseMatrix::from_matrix_market(&text).unwrap();
        assert_eq!(m.to_matrix_market(), text);

        let v = json(&hodge(&[
            "operator",
            "--k",
            k,
            "--kind",
            kind,
            "--input",
            s(&g),
        ]));
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), m.nnz());
        for e in entries {
            let (i, j) = (
                e[0].as_u64().unwrap() as usize,
                e[1].as_u64().unwrap() as usize,
            );
            assert_eq!(m.get(i - 1, j - 1), e[2].as_f64().unwrap());
        }
    }
    // a weighted adjoint survives the trip bit for bit
    let w = write(&dir, "w.tsv", "1 2 3\n3 5 0.7\n2 1.1\n");
    let out = hodge(&[
        "operator",
        "--k",
        "0",
        "--kind",
        "adjoint",
        "--export",
        "--weights",
        s(&w),
        "--input",
        s(&g),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let m = SparseMatrix::from_matrix_market(&text).unwrap();
    assert_eq!(m.to_matrix_market(), text);
    assert!(m.triplets().any(|(_, _, v)| v.fract() != 0.0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g1.txt", G1);
    let x = write(
        &dir,
        "x.tsv",
        "1 2 0.3\n2 3 -1.2\n3 4 2.5\n1 4 0.1\n3 5 1\n5 6 -0.4\n3 6 0.9\n",
    );
    let runs: Vec<Vec<u8>> = (0..3)
        .map(|_| hodge(&["decompose", "--input", s(&g), "--cochain", s(&x)]).stdout)
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(v["k"], 1);
    assert!(v["checks"]["reconstruction_error"].as_f64().unwrap() < 1e-8);
    // keys come out sorted
    let text = String::from_utf8(runs[0].clone()).unwrap();
    let top: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let positions: Vec<usize> = top
        .iter()
        .map(|k| text.find(&format!("\"{k}\"")).unwrap())
        .collect();
    let sorted = {
        let mut p = positions.clone();
        p.sort();
        p
    };
    assert_eq!(positions, sorted);
}

#[test]
fn decomposition_plot_columns() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.txt", C4);
    let x = write(&dir, "x.tsv", "1 2 2\n2 3 2\n3 4 2\n1 4 4\n");
    let out = hodge(&["decompose", "--input", s(&g), "--cochain", s(&x), "--plot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i\tj\tx\texact\tharmonic\tcoexact"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn spectrum_plot_columns() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.txt", C4);
    let out = hodge(&["spectrum", "--k", "0", "--plot", "--input", s(&g)]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index\teigenvalue"));
    for (i, (line, want)) in lines.zip([0.0, 2.0, 2.0, 4.0]).enumerate() {
        let (idx, val) = line.split_once('\t').unwrap();
        assert_eq!(idx, (i + 1).to_string());
        assert!((val.parse::<f64>().unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(hodge(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hodge(&["betti", "--input", "/nonexistent/graph.txt"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hodge(&["spectrum", "--k", "0", "--tolerance", "-1", "--input", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hodge(&["--help"]).status.code(), Some(0));

    let bad = write(&dir, "bad.txt", "1 2\n2 two\n");
    let out = hodge(&["betti", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let g = write(&dir, "g1.txt", G1);
    let x = write(
        &dir,
        "x.tsv",
        "1 2 0.3\n2 3 -1.2\n3 4 2.5\n1 4 0.1\n3 5 1\n5 6 -0.4\n3 6 0.9\n",
    );
    let out = hodge(&[
        "decompose",
        "--input",
        s(&g),
        "--cochain",
        s(&x),
        "--max-iterations",
        "1",
        "--tolerance",
        "1e-14",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["error"], "non-convergence");
    assert_eq!(report["iterations"], 1);
}

#[test]
fn road_sharing_game() {
    let dir = TempDir::new().unwrap();
    let mut utilities = vec![
        serde_json::Map::new(),
        serde_json::Map::new(),
        serde_json::Map::new(),
    ];
    for p in 0..8usize {
        let s: Vec<usize> = vec![p >> 2 & 1, p >> 1 & 1, p & 1];
        let label: Vec<&str> = s.iter().map(|&x| if x == 0 { "a" } else { "b" }).collect();
        let key = label.join(",");
        let commuter = -2.0 * ((s[1] == s[0]) as u8 + (s[2] == s[0]) as u8) as f64;
        let robber = if s[2] == s[1] { -1.0 } else { 0.0 };
        utilities[0].insert(key.clone(), commuter.into());
        utilities[1].insert(key.clone(), robber.into());
        utilities[2].insert(key, (-robber).into());
    }
    let spec = serde_json::json!({ "strategies": [["a", "b"], ["a", "b"], ["a", "b"]], "utilities": utilities });
    let f = write(&dir, "game.json", &spec.to_string());
    let v = json(&hodge(&["game", "--input", s(&f)]));
    assert_eq!(v["n_edges"], 12);
    assert_eq!(v["potential_game"], false);
    assert_eq!(v["pure_nash"], serde_json::json!([]));
    let pot = &v["potential"];
    for (p, want) in [
        ("a,a,a", 1.0),
        ("b,b,b", 1.0),
        ("a,b,b", -1.0),
        ("b,a,a", -1.0),
        ("a,a,b", 0.0),
    ] {
        assert!((pot[p].as_f64().unwrap() - want).abs() < 1e-9, "{p}");
    }
    let strong: Vec<(String, String)> = v["flow"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["value"].as_f64().unwrap() == 4.0)
        .map(|e| {
            (
                e["from"].as_str().unwrap().into(),
                e["to"].as_str().unwrap().into(),
            )
        })
        .collect();
    assert_eq!(
        strong,
        vec![
            ("a,a,a".into(), "b,a,a".into()),
            ("b,b,b".into(), "a,b,b".into())
        ]
    );
}

#[test]
fn ranking_and_cheeger() {
    let dir = TempDir::new().unwrap();
    let r = write(
        &dir,
        "r.csv",
        "voter,item,score\nu1,alpha,5\nu1,beta,3\nu2,beta,4\nu2,gamma,1\nu3,alpha,4\nu3,gamma,2\n",
    );
    let v = json(&hodge(&["rank", "--input", s(&r)]));
    assert_eq!(v["order"], serde_json::json!(["alpha", "beta", "gamma"]));
    let out = hodge(&["rank", "--input", s(&r), "--plot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("rank\titem\tscore\n1\talpha\t"));

    let c4 = write(&dir, "c4.txt", C4);
    let v = json(&hodge(&["cheeger", "--input", s(&c4)]));
    assert_eq!(
        (v["h_numerator"].as_u64(), v["h_denominator"].as_u64()),
        (Some(1), Some(2))
    );
    assert_eq!(v["normalized"]["holds"], true);

    let f = write(&dir, "f.tsv", "1 0\n2 1\n3 5\n4 2\n");
    let p3 = write(&dir, "p3.txt", "1 2\n2 3\n3 4\n");
    let v = json(&hodge(&[
        "plap",
        "--p",
        "2",
        "--f",
        s(&f),
        "--input",
        s(&p3),
    ]));
    let got: Vec<f64> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(got, vec![-1.0, -3.0, 7.0, -3.0]);
}
