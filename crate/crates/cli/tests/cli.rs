use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn levylab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levylab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const MC: &str = r#"
[model]
id = "stable"

[potential]
family = "quadratic"

[run]
t = [0.3]
n_paths = 4000
"#;

#[test]
fn unknown_model_exits_2_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "[model]\nid = \"no-such-model\"\n");
    let out = levylab(tmp.path(), &["--config", "c.toml", "check-model"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-model"));
}

#[test]
fn unknown_config_key_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "[run]\nseeed = 3\n");
    let out = levylab(tmp.path(), &["--config", "c.toml", "catalog"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seeed"));
}

#[test]
fn monte_carlo_needs_a_seed() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", MC);
    let out = levylab(tmp.path(), &["--config", "c.toml", "mc-fk"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", MC);
    for (dir, threads) in [("a", "1"), ("b", "4")] {
        let out = levylab(
            tmp.path(),
            &[
                "--config",
                "c.toml",
                "--seed",
                "11",
                "--format",
                "json",
                "--threads",
                threads,
                "--out",
                dir,
                "mc-fk",
            ],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for file in ["mc_fk.json", "manifest.json"] {
        let a = fs::read(tmp.path().join("a").join(file)).unwrap();
        let b = fs::read(tmp.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert!(manifest["versions"]["levylab-core"].is_string());
}

#[test]
fn different_seeds_change_the_estimate() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", MC);
    for (dir, seed) in [("a", "1"), ("b", "2")] {
        assert!(levylab(
            tmp.path(),
            &["--config", "c.toml", "--seed", seed, "--out", dir, "mc-fk"]
        )
        .status
        .success());
    }
    let a = fs::read_to_string(tmp.path().join("a/mc_fk.csv")).unwrap();
    let b = fs::read_to_string(tmp.path().join("b/mc_fk.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn classify_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "c.toml",
        "[model]\nid = \"relativistic\"\n[classify]\npoints = [[1.0, 0.5, 0.0], [1.0, -0.5, 0.0], [0.5, 0.0, 0.0]]\n",
    );
    let out = levylab(
        tmp.path(),
        &["--config", "c.toml", "--out", "o", "classify"],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("o/classify.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    let gsd: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(gsd, ["true", "false", "false"]);
}

#[test]
fn classify_refuses_gaussian_tail() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "c.toml",
        "[model]\nid = \"gaussian-tail-counterexample\"\n",
    );
    let out = levylab(
        tmp.path(),
        &["--config", "c.toml", "--out", "o", "classify"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heat_kernel_aliasing_is_a_numerical_failure() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "c.toml",
        "[grid]\nboxes = [8.0]\nn = 512\n[run]\nt = [0.2]\n",
    );
    let out = levylab(
        tmp.path(),
        &["--config", "c.toml", "--out", "o", "heatkernel"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn catalog_lists_models() {
    let tmp = tempfile::tempdir().unwrap();
    let out = levylab(tmp.path(), &["--out", "o", "--format", "json", "catalog"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("o/catalog.json")).unwrap()).unwrap();
    let ids: Vec<&str> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[0].as_str().unwrap())
        .collect();
    for id in ["stable", "relativistic", "gaussian-tail-counterexample"] {
        assert!(ids.contains(&id), "{id}");
    }
}

#[test]
fn verify_passes_and_lists_checks() {
    let tmp = tempfile::tempdir().unwrap();
    let out = levylab(tmp.path(), &["--out", "o", "verify"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("o/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["result"]["checks"].as_array().unwrap().len(), 11);
    assert_eq!(manifest["result"]["all_passed"], true);
}
