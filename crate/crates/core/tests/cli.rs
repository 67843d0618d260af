use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use catclust::fixtures::WORKED_EXAMPLE_CSV;
use tempfile::TempDir;

fn catclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catclust"))
        .args(args)
        .env_remove("CATCLUST_THREADS")
        .output()
        .expect("failed to spawn catclust")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn matrix_on_the_fixture() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.csv", WORKED_EXAMPLE_CSV);
    let out = dir.path().join("dsim.csv");
    let o = catclust(&["matrix", &input, "--header", "-o", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    let cell = |i: usize, j: usize| -> f64 { rows[i][j].parse().unwrap() };
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[3][6], "0.3845");
    assert_eq!(rows[1][2], "1.4872");
    assert_eq!(rows[7][8], "0.0000");
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 10);
        assert_eq!(row[i], "0.0000");
        for j in 0..10 {
            assert_eq!(cell(i, j), cell(j, i));
        }
    }
    assert!(dir.path().join("dsim.csv.manifest.json").exists());
}

#[test]
fn matrix_full_precision_and_hamming() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", "a,x\na,y\nb,y\n");
    let out = dir.path().join("h.csv");
    let o = catclust(&[
        "matrix",
        &input,
        "--measure",
        "hamming",
        "--precision",
        "full",
        "-o",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let last = text.lines().last().unwrap();
    let values: Vec<f64> = last.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(values, vec![2.0, 1.0, 0.0]);
}

#[test]
fn matrix_single_row() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "one.csv", "a,b,c\n");
    let out = dir.path().join("one_dsim.csv");
    let o = catclust(&["matrix", &input, "-o", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "0.0000\n");
}

#[test]
fn missing_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.csv");
    let out = dir.path().join("x.csv");
    let o = catclust(&["matrix", path_str(&missing), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.csv"));
}

#[test]
fn ragged_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.csv", "a,b\nc\n");
    let out = dir.path().join("x.csv");
    let o = catclust(&["matrix", &input, "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn cluster_duplicates_and_determinism() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "dups.csv", "a,a\na,a\nb,b\nb,b\nc,c\nc,c\n");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = catclust(&[
            "cluster",
            &input,
            "--k",
            "3",
            "--seed",
            "7",
            "--restarts",
            "5",
            "--out-dir",
            path_str(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    };
    let first = run("r1");
    let second = run("r2");

    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("result.json")).unwrap()).unwrap();
    assert_eq!(result["objective"].as_f64(), Some(0.0));
    assert_eq!(result["avg_silhouette"].as_f64(), Some(1.0));
    let labels: Vec<u64> = result["labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(labels[0], labels[1]);
    assert_eq!(labels[2], labels[3]);
    assert_eq!(labels[4], labels[5]);

    for file in ["labels.csv", "centers.json", "result.json", "silhouette.csv"] {
        assert_eq!(
            fs::read(first.join(file)).unwrap(),
            fs::read(second.join(file)).unwrap(),
            "{file} differs between identical runs"
        );
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "cluster");
    assert_eq!(manifest["seed"].as_u64(), Some(7));
}

#[test]
fn cluster_rejects_bad_k() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED_EXAMPLE_CSV);
    let out = dir.path().join("o");
    let o = catclust(&["cluster", &input, "--header", "--k", "1", "--out-dir", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k must be at least 2"));
    let o = catclust(&["cluster", &input, "--header", "--k", "10", "--out-dir", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cluster_kmodes_and_plus() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED_EXAMPLE_CSV);
    for alg in ["kmodes", "kscc-plus"] {
        let out = dir.path().join(alg);
        let o = catclust(&[
            "cluster",
            &input,
            "--header",
            "--k",
            "3",
            "--algorithm",
            alg,
            "--out-dir",
            path_str(&out),
        ]);
        assert!(o.status.success(), "{alg}: {}", stderr(&o));
        let labels = fs::read_to_string(out.join("labels.csv")).unwrap();
        assert_eq!(labels.lines().count(), 11);
    }
}

#[test]
fn sweep_finds_three_groups() {
    let dir = TempDir::new().unwrap();
    let rows: String = (0..12)
        .map(|i| {
            let g = ["p", "q", "r"][i % 3];
            format!("{g}1,{g}2,{g}3,{g}4\n")
        })
        .collect();
    let input = write(&dir, "three.csv", &rows);
    let out = dir.path().join("sweep");
    let o = catclust(&[
        "sweep",
        &input,
        "--kmax",
        "6",
        "--restarts",
        "5",
        "--out-dir",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("k_opt=3"));
    let curve = fs::read_to_string(out.join("silhouette_curve.csv")).unwrap();
    assert!(curve.starts_with("k,avg_silhouette\n2,"));
    assert_eq!(curve.lines().count(), 6);
    for k in 2..=6 {
        assert!(out.join(format!("silhouette_k{k}.csv")).exists());
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(summary["k_opt"].as_u64(), Some(3));
}

#[test]
fn sweep_rejects_inverted_range() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED_EXAMPLE_CSV);
    let out = dir.path().join("s");
    let o = catclust(&[
        "sweep",
        &input,
        "--header",
        "--kmin",
        "5",
        "--kmax",
        "3",
        "--out-dir",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_then_sweep_recovers_k() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("synth.csv");
    let o = catclust(&[
        "generate",
        "--n",
        "200",
        "--m",
        "8",
        "--k",
        "4",
        "--cats",
        "8",
        "--noise",
        "0.05",
        "--seed",
        "11",
        "-o",
        path_str(&data),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let labels = fs::read_to_string(dir.path().join("synth.csv.labels")).unwrap();
    assert_eq!(labels.lines().count(), 200);

    let out = dir.path().join("sweep");
    let o = catclust(&[
        "sweep",
        path_str(&data),
        "--kmax",
        "8",
        "--restarts",
        "10",
        "--seed",
        "3",
        "--out-dir",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("k_opt=4"), "{}", stdout(&o));
}

#[test]
fn generate_without_noise_repeats_prototypes() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("g.csv");
    let o = catclust(&["generate", "--n", "20", "--m", "5", "--k", "2", "-o", path_str(&data)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&data).unwrap();
    let mut distinct: Vec<&str> = text.lines().collect();
    distinct.sort_unstable();
    distinct.dedup();
    assert_eq!(distinct.len(), 2);
}

#[test]
fn discretize_keeps_shape_and_warns_on_constant_columns() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "num.csv", "x,y,z\n0,1,5\n2.5,2,5\n5,3,5\n10,4,5\n");
    let out = dir.path().join("cat.csv");
    let o = catclust(&["discretize", &input, "--header", "-o", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning: column 3"), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,z");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
    assert_eq!(lines[1], "grade_1,grade_1,grade_1");
    assert_eq!(lines[4], "grade_5,grade_5,grade_1");

    let o = catclust(&["discretize", &input, "--header", "--linguistic", "-o", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(4).unwrap().starts_with("very high,"));
}
