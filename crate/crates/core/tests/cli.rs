use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use skelbary::solver::DecompositionWitness;

fn skelbary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skelbary"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write_cube(dir: &Path) -> String {
    let path = dir.join("cube.json");
    let mut verts = Vec::new();
    for mask in 0..8 {
        verts.push(
            (0..3)
                .map(|i| if mask >> i & 1 == 1 { "1" } else { "-1" })
                .collect::<Vec<_>>(),
        );
    }
    let json = serde_json::json!({ "name": "cube", "vertices": verts });
    std::fs::write(&path, json.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn without_elapsed(csv: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn build_prints_lattice_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path());
    let out = skelbary(&["build", "--polytope", &cube]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["f_vector"], serde_json::json!([8, 12, 6]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["facets"].as_array().unwrap().len(), 6);
    assert_eq!(v["faces"], 28);
}

#[test]
fn decompose_writes_a_witness_the_testmap_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path());
    let w = dir.path().join("w.json");
    let w = w.to_str().unwrap();
    let out = skelbary(&[
        "decompose",
        "--polytope",
        &cube,
        "--point",
        "0,0,0",
        "--n",
        "3",
        "--k",
        "1",
        "--out",
        w,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(w).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "witness");
    let witness = DecompositionWitness::from_json(&text).unwrap();
    assert_eq!(witness.points.len(), 3);
    assert!(witness.deterministic);

    let out = skelbary(&["testmap", "--polytope", &cube, "--k", "1", "--witness", w]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["phi_max_abs"], 0.0);

    let out = skelbary(&[
        "testmap",
        "--polytope",
        &cube,
        "--k",
        "1",
        "--points",
        "0,0,0;-1,-1,0",
    ]);
    let v = stdout_json(&out);
    assert!((v["psi"][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["psi"][1], 0.0);
}

#[test]
fn decompose_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path());
    // certified refutation below the threshold is not an error
    let out = skelbary(&[
        "decompose",
        "--polytope",
        &cube,
        "--point",
        "0,0,0",
        "--n",
        "1",
        "--k",
        "2",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "infeasible");
    assert_eq!(v["all_certified"], true);

    let out = skelbary(&[
        "decompose",
        "--polytope",
        &cube,
        "--point",
        "-1/2,0,1",
        "--parts",
        "0:1/4,1:3/4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["status"] == "witness" || v["status"] == "infeasible");
    assert!(v["tuples_examined"].as_u64().unwrap() > 0);

    let out = skelbary(&[
        "decompose",
        "--polytope",
        &cube,
        "--point",
        "0,0,0",
        "--n",
        "4",
        "--k",
        "1",
        "--strategy",
        "factored",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["points"].as_array().unwrap().len(), 4);

    let out = skelbary(&[
        "decompose",
        "--polytope",
        &cube,
        "--point",
        "0,0,0",
        "--n",
        "3",
        "--k",
        "1",
        "--parallel",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["deterministic"], false);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices":[["1.5"]]}"#).unwrap();
    let bad = bad.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "2,0,0",
            "--n",
            "3",
            "--k",
            "1",
        ],
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "0,0",
            "--n",
            "3",
            "--k",
            "1",
        ],
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "x",
            "--n",
            "3",
            "--k",
            "1",
        ],
        vec![
            "decompose",
            "--polytope",
            bad,
            "--point",
            "0",
            "--n",
            "1",
            "--k",
            "1",
        ],
        vec![
            "decompose",
            "--polytope",
            "/nonexistent.json",
            "--point",
            "0",
            "--n",
            "1",
            "--k",
            "1",
        ],
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "0,0,0",
            "--parts",
            "1:1/2,1:1/3",
        ],
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "0,0,0",
            "--n",
            "3",
            "--k",
            "1",
            "--strategy",
            "magic",
        ],
        vec![
            "decompose",
            "--polytope",
            &cube,
            "--point",
            "0,0,0",
            "--n",
            "3",
        ],
        vec![
            "verify-theorem",
            "--generator",
            "cube",
            "--dim",
            "3",
            "--n",
            "1..2",
            "--k",
            "1",
        ],
        vec![
            "verify-theorem",
            "--generator",
            "blob",
            "--dim",
            "3",
            "--n",
            "3",
            "--k",
            "1",
        ],
        vec![
            "probe-infeasible",
            "--generator",
            "random_hull",
            "--dim",
            "3",
            "--n",
            "3",
            "--k",
            "1",
        ],
        vec!["dim-check", "--polytope", &cube, "--n", "1", "--k", "1"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = skelbary(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn sweep_reports_repeat_and_rows_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("instances");
    let args = [
        "verify-theorem",
        "--generator",
        "random_hull",
        "--dim",
        "3",
        "--n",
        "2..3",
        "--k",
        "2..3",
        "--trials",
        "2",
        "--seed",
        "17",
        "--target",
        "boundary",
    ];
    let first = skelbary(&[&args[..], &["--dump-instances", dump.to_str().unwrap()]].concat());
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = skelbary(&args);
    assert_eq!(
        without_elapsed(&first.stdout),
        without_elapsed(&second.stdout)
    );
    let header = String::from_utf8_lossy(&first.stdout)
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(
        header,
        "generator,d,n,k,status,tuples_examined,phi_max_abs,elapsed_ms"
    );
    assert!(String::from_utf8_lossy(&first.stderr).contains("violations=0"));
    let a = skelbary(&[&args[..], &["--no-timing"]].concat());
    let b = skelbary(&[&args[..], &["--no-timing"]].concat());
    assert_eq!(a.stdout, b.stdout);

    let rows = reproduce_rows(&dump);
    assert_eq!(rows, 2 * 2 * 2);
}

/// Reruns every dumped row through `decompose` and compares statuses.
fn reproduce_rows(dump: &Path) -> usize {
    let mut index = csv::Reader::from_path(dump.join("instances.csv")).unwrap();
    let mut count = 0;
    for record in index.records() {
        let r = record.unwrap();
        let polytope = dump.join(&r[1]);
        let out = skelbary(&[
            "decompose",
            "--polytope",
            polytope.to_str().unwrap(),
            "--point",
            &r[2],
            "--n",
            &r[3],
            "--k",
            &r[4],
        ]);
        assert!(out.status.success());
        assert_eq!(
            stdout_json(&out)["status"].as_str().unwrap(),
            &r[5],
            "row {}",
            &r[0]
        );
        count += 1;
    }
    count
}

#[test]
fn probe_rows_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("probe");
    let csv = dir.path().join("probe.csv");
    let out = skelbary(&[
        "probe-infeasible",
        "--generator",
        "random_hull",
        "--dim",
        "3",
        "--n",
        "2",
        "--k",
        "1",
        "--trials",
        "3",
        "--seed",
        "5",
        "--out",
        csv.to_str().unwrap(),
        "--dump-instances",
        dump.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(reproduce_rows(&dump), 3);
}

#[test]
fn dim_check_centers_first() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.json");
    // a square away from the origin
    std::fs::write(
        &path,
        r#"{"vertices":[["2","2"],["4","2"],["4","4"],["2","4"]]}"#,
    )
    .unwrap();
    let out = skelbary(&[
        "dim-check",
        "--polytope",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--k",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["bound"], 2);
}
