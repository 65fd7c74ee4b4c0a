use std::path::Path;
use std::process::{Command, Output};

fn stathyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stathyp"))
        .args(args)
        .env_remove("STATHYP_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    // Group strings contain commas and are quoted; count fields from the end.
    let from_end = header.len() - idx;
    lines
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            fields[fields.len() - from_end].to_string()
        })
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sphere_counts_for_the_free_group() {
    let out = stdout(&stathyp(&["spheres", "--group", "free(2)", "--n", "1..6"]));
    assert_eq!(column(&out, "count"), ["4", "12", "36", "108", "324", "972"]);
    let zero = stdout(&stathyp(&["spheres", "--group", "free(2)", "--n", "0"]));
    assert_eq!(column(&zero, "count"), ["1"]);
}

#[test]
fn malformed_groups_fail() {
    let out = stathyp(&["spheres", "--group", "free(2", "--n", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse"));
    assert!(!stathyp(&["spheres", "--n", "1"]).status.success());
}

#[test]
fn integer_estimates_and_plot_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    stdout(&stathyp(&["estimate", "--group", "abelian(1)", "--radii", "5,10", "--out", path_str(&csv)]));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "spec,n,method,E_n,pairs,stderr,ci95,seed");
    assert_eq!(column(&text, "E_n"), ["1", "1"]);
    assert_eq!(column(&text, "method"), ["exact", "exact"]);
    let dat = std::fs::read_to_string(dir.path().join("z.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), ["5 1", "10 1"]);
}

#[test]
fn sampling_requires_a_seed() {
    let out = stathyp(&["estimate", "--group", "free(2)", "--n", "4,12", "--pairs", "1000000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn split_product_estimates() {
    let out = stdout(&stathyp(&[
        "estimate", "--group", "direct(free(2),cyclic(3))", "--n", "2,3,14", "--samples", "2000", "--seed", "5",
        "--pairs", "100000",
    ]));
    assert_eq!(column(&out, "method"), ["exact", "exact", "sampled"]);
    assert_eq!(column(&out, "seed"), ["", "", "5"]);
    for v in column(&out, "E_n") {
        let v: f64 = v.parse().unwrap();
        assert!((0.0..=2.0).contains(&v));
    }
}

#[test]
fn diagnose_profiles_partition_the_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    stdout(&stathyp(&[
        "diagnose", "--group", "free_product(abelian(2),free(1))", "--n", "12", "--bigR", "2,3,4", "--out",
        path_str(&csv),
    ]));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.contains(",summary,")).collect();
    assert_eq!(rows.len(), 3);
    let summaries = std::iter::once(text.lines().next().unwrap()).chain(rows).collect::<Vec<_>>().join("\n");
    assert_eq!(column(&summaries, "count"), column(&summaries, "total"));
    let poincare = std::fs::read_to_string(dir.path().join("profile_poincare.csv")).unwrap();
    assert!(poincare.lines().any(|l| l.contains(",left,") && l.contains(",summary,")));
}

#[test]
fn diagnose_rejects_bad_input() {
    let out = stathyp(&["diagnose", "--group", "abelian(2)", "--n", "12"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not supported"));
    let out = stathyp(&["diagnose", "--group", "free_product(abelian(2),free(1))", "--n", "12", "--rho", "0.6"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ρ"));
}

#[test]
fn exhaustive_and_counted_profiles_agree() {
    let run = |extra: &[&str]| {
        let mut args = vec!["diagnose", "--group", "free_product(free(1),cyclic(3))", "--n", "6,8", "--bigR", "1..2"];
        args.extend(extra);
        stdout(&stathyp(&args))
    };
    assert_eq!(run(&[]), run(&["--exhaustive"]));
}

#[test]
fn growth_report_columns() {
    let out = stdout(&stathyp(&["growth", "--group", "free(2)", "--n", "6"]));
    assert_eq!(column(&out, "n").len(), 7);
    let ratio = column(&out, "ratio_rate");
    assert!((ratio[3].parse::<f64>().unwrap() - 3f64.ln()).abs() < 1e-12);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "group = \"free(2)\"\nn = \"1..3\"\n").unwrap();
    let from_file = stdout(&stathyp(&["--config", path_str(&cfg), "spheres"]));
    assert_eq!(column(&from_file, "count"), ["4", "12", "36"]);
    let overridden = stdout(&stathyp(&["--config", path_str(&cfg), "spheres", "--n", "4"]));
    assert_eq!(column(&overridden, "count"), ["108"]);
    std::fs::write(&cfg, "grup = \"free(2)\"\n").unwrap();
    assert!(!stathyp(&["--config", path_str(&cfg), "spheres"]).status.success());
}

#[test]
fn warm_cache_matches_cold_and_corruption_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = path_str(dir.path()).to_string();
    let args = ["--cache-dir", &cache, "spheres", "--group", "free_product(abelian(2),free(1))", "--n", "2..4"];
    let cold = stdout(&stathyp(&args));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 3);
    let warm = stdout(&stathyp(&args));
    assert_eq!(cold, warm);
    stdout(&stathyp(&["--cache-dir", &cache, "cache", "verify"]));

    let target = files.iter().find(|p| path_str(p).contains(".r4.")).unwrap();
    let info = stdout(&stathyp(&["cache", "inspect", path_str(target)]));
    assert!(info.contains("count:    466"));
    let mut bytes = std::fs::read(target).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0xff;
    std::fs::write(target, bytes).unwrap();
    assert!(!stathyp(&["cache", "verify", path_str(target)]).status.success());
    assert!(!stathyp(&["--cache-dir", &cache, "cache", "verify"]).status.success());
    assert!(!stathyp(&args).status.success());
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_stathyp"))
        .args(["spheres", "--group", "cyclic(5)", "--n", "2"])
        .env("STATHYP_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
