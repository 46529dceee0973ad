use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmspectra")).args(args).output().expect("spawn cmspectra")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(String::from)
        .collect()
}

fn header_value(path: &Path, key: &str) -> String {
    let prefix = format!("# {key}=");
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix(&prefix).map(String::from))
        .unwrap_or_else(|| panic!("no {key} in {}", path.display()))
}

#[test]
fn regular_sample_has_500_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["sample", "--n", "100", "--omega", "10", "--seed", "3", "--out", out]);
    let edges = fs::read_to_string(dir.path().join("edges.txt")).unwrap();
    let total: u64 = edges
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 500);
    assert_eq!(header_value(&dir.path().join("edges.txt"), "edges"), "500");
    let degrees = fs::read_to_string(dir.path().join("degrees.txt")).unwrap();
    assert!(degrees.lines().filter(|l| !l.starts_with('#')).all(|l| l == "10"));
    assert_eq!(degrees.lines().filter(|l| !l.starts_with('#')).count(), 100);
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(&["esd", "--measure", "fig1-red", "--n", "300", "--seed", "0", "--out", d.path().to_str().unwrap()]);
    }
    for f in ["spectrum.csv", "histogram.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
    let c = tempfile::tempdir().unwrap();
    ok(&["esd", "--measure", "fig1-red", "--n", "300", "--seed", "1", "--out", c.path().to_str().unwrap()]);
    assert_ne!(
        fs::read(a.path().join("spectrum.csv")).unwrap(),
        fs::read(c.path().join("spectrum.csv")).unwrap()
    );
}

#[test]
fn sampling_without_seed_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["esd", "--n", "50", "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn config_file_matches_flags() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(&[
        "sample", "--measure", "kind=two-atom; alpha=3; beta=0.5", "--n", "200", "--omega", "2*sqrt",
        "--seed", "9", "--poissonized", "--out", a.path().to_str().unwrap(),
    ]);
    let cfg = b.path().join("run.cfg");
    fs::write(
        &cfg,
        format!(
            "# same run from a file\nkind = two-atom\nalpha = 3\nbeta = 0.5\nn = 200\nomega = 2*sqrt\nseed = 9\npoissonized = true\nout = {}\n",
            b.path().display()
        ),
    )
    .unwrap();
    ok(&["sample", "--config", cfg.to_str().unwrap()]);
    for f in ["edges.txt", "degrees.txt"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    // flags override the file
    ok(&["sample", "--config", cfg.to_str().unwrap(), "--n", "50"]);
    assert_eq!(header_value(&b.path().join("edges.txt"), "n"), "50");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "preset=delta\nsead=3\n").unwrap();
    assert!(!run(&["density", "--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn density_of_point_mass_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["density", "--measure", "delta", "--grid", "601", "--out", dir.path().to_str().unwrap()]);
    let path = dir.path().join("density.csv");
    let mass: f64 = header_value(&path, "mass").parse().unwrap();
    assert!((0.99..=1.01).contains(&mass), "{mass}");
    assert_eq!(header_value(&path, "command"), "density");
    assert_eq!(data_rows(&path).len(), 601);
}

#[test]
fn three_atom_density_has_internal_zeros() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["density", "--measure", "fig2", "--grid", "1001", "--out", dir.path().to_str().unwrap()]);
    let rows: Vec<(f64, f64)> = data_rows(&dir.path().join("density.csv"))
        .iter()
        .map(|l| {
            let (x, r) = l.split_once(',').unwrap();
            (x.parse().unwrap(), r.parse().unwrap())
        })
        .collect();
    // a zero strictly between two positive stretches on x > 0
    let pos: Vec<&(f64, f64)> = rows.iter().filter(|(x, _)| *x > 0.0).collect();
    let first = pos.iter().position(|(_, r)| *r > 1e-3).unwrap();
    let last = pos.iter().rposition(|(_, r)| *r > 1e-3).unwrap();
    assert!(pos[first..last].iter().any(|(_, r)| *r < 1e-6));
}

#[test]
fn support_reports_components_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&["support", "--measure", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert!(stdout.contains("components_mp=2"), "{stdout}");
    assert_eq!(data_rows(&dir.path().join("support_mu.csv")).len(), 3);
    let trace = data_rows(&dir.path().join("xi_trace.csv"));
    assert!(trace.len() > 700);
    let delta = tempfile::tempdir().unwrap();
    ok(&["support", "--measure", "delta", "--out", delta.path().to_str().unwrap()]);
    let row = &data_rows(&delta.path().join("support_mu.csv"))[0];
    let (a, b) = row.split_once(',').unwrap();
    assert!((a.parse::<f64>().unwrap() + 2.0).abs() < 1e-8);
    assert!((b.parse::<f64>().unwrap() - 2.0).abs() < 1e-8);
}

#[test]
fn phase_diagram_row_flips_once_and_is_fast() {
    let dir = tempfile::tempdir().unwrap();
    let t = Instant::now();
    ok(&["phase-diagram", "--grid", "200", "--beta-range", "0.05,0.95", "--out", dir.path().to_str().unwrap()]);
    assert!(t.elapsed().as_secs_f64() < 5.0);
    let rows = data_rows(&dir.path().join("phase_diagram.csv"));
    assert_eq!(rows.len(), 200 * 200);

    let row = tempfile::tempdir().unwrap();
    ok(&[
        "phase-diagram", "--grid", "401", "--alpha-range", "2,12", "--beta-range", "0.5,0.5001",
        "--out", row.path().to_str().unwrap(),
    ]);
    let flags: Vec<(f64, bool)> = data_rows(&row.path().join("phase_diagram.csv"))
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2] == "true")
        })
        .collect();
    let at_half: Vec<&(f64, bool)> = flags.iter().take(401).collect();
    let flips: Vec<f64> =
        at_half.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| w[1].0).collect();
    assert_eq!(flips.len(), 1);
    assert!((flips[0] - 6.771).abs() < 0.03, "{flips:?}");

    let boundary = data_rows(&dir.path().join("phase_boundary.csv"));
    let thresholds: Vec<f64> =
        boundary.iter().map(|l| l.split_once(',').unwrap().1.parse().unwrap()).collect();
    assert!(thresholds.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn compare_and_couple_report_distances() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = ok(&["compare", "--n", "500", "--omega", "ceil-sqrt", "--seed", "2", "--out", out]);
    let ks: f64 = stdout.trim().strip_prefix("kolmogorov=").unwrap().parse().unwrap();
    assert!(ks < 0.08, "{ks}");
    let stdout = ok(&[
        "couple", "--measure", "kind=two-atom; alpha=3; beta=0.5", "--n", "400", "--omega", "ceil-sqrt",
        "--seed", "2", "--out", out,
    ]);
    assert!(stdout.contains("wasserstein1="));
    let text = fs::read_to_string(dir.path().join("couple.txt")).unwrap();
    assert!(text.contains("# command=couple") && text.contains("hoffman_wielandt="));
}

#[test]
fn solver_failure_exits_nonzero_and_flags_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "density", "--measure", "fig2", "--grid", "11", "--tol", "1e-300", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let text = fs::read_to_string(dir.path().join("density.csv")).unwrap();
    assert!(text.contains("# partial=true"));
}
