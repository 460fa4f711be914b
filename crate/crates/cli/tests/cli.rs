use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn polyvem(dir: &Path, args: &[&str], config: &str) -> Output {
    let cfg = dir.join("study.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_polyvem"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn benchmark_convergence_on_two_grids() {
    let dir = TempDir::new().unwrap();
    let o = polyvem(dir.path(), &["convergence", "--out", "res"], "case = benchmark\nrefinements = 4, 8\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("res/convergence_benchmark_square.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0].as_str(), rows[1][0].as_str()), ("25", "81"));
    assert_eq!(rows[0][2], "-");
    for r in &rows {
        assert!(r[1].parse::<f64>().unwrap().is_finite() && r[3].parse::<f64>().unwrap().is_finite());
    }
    assert!(rows[1][2].parse::<f64>().is_ok() && rows[1][4].parse::<f64>().is_ok());
    assert!(dir.path().join("res/mesh_square_8.mesh").is_file());
}

#[test]
fn hencky_gradient_rates() {
    let dir = TempDir::new().unwrap();
    let o = polyvem(dir.path(), &["convergence", "--out", "."], "case = hencky\nrefinements = 4, 8, 16, 32\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("convergence_hencky_square.csv"));
    for r in &rows[2..] {
        let rate: f64 = r[4].parse().unwrap();
        assert!((0.9..=1.2).contains(&rate), "{r:?}");
    }
}

#[test]
fn outputs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = "case = case2\nfamily = voronoi\nrefinements = 30, 60\n";
    let a = polyvem(dir.path(), &["convergence", "--out", "a", "--threads", "1"], cfg);
    let b = polyvem(dir.path(), &["convergence", "--out", "b"], cfg);
    assert!(a.status.success() && b.status.success());
    for name in ["convergence_case2_voronoi.csv", "alpha_case2_voronoi.csv", "mesh_voronoi_60.mesh"] {
        let x = fs::read(dir.path().join("a").join(name)).unwrap();
        let y = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let c = polyvem(dir.path(), &["convergence", "--out", "c", "--seed", "9"], cfg);
    assert!(c.status.success());
    assert_ne!(
        fs::read(dir.path().join("a/mesh_voronoi_60.mesh")).unwrap(),
        fs::read(dir.path().join("c/mesh_voronoi_60.mesh")).unwrap()
    );
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let o = polyvem(dir.path(), &["convergence"], "case = hencky\nrefinements =\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty refinement list"), "{}", stderr(&o));

    let o = polyvem(dir.path(), &["block"], "study = strip\n");
    assert_eq!(o.status.code(), Some(2));

    let o = polyvem(dir.path(), &["solve"], "law = linear\nmesh_file = missing.mesh\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does not exist"));
}

#[test]
fn unloaded_block() {
    let dir = TempDir::new().unwrap();
    let o = polyvem(dir.path(), &["block", "--out", "."], "refinements = 4\nforce = 0, 0\nsteps = 2\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("block.csv"));
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.0);
    assert!(dir.path().join("deformed_4.csv").is_file());
}

#[test]
fn neo_hookean_variant_flag_is_observable() {
    let dir = TempDir::new().unwrap();
    let std = polyvem(dir.path(), &["block", "--out", "s"], "refinements = 6\n");
    let vol = polyvem(dir.path(), &["block", "--out", "v"], "refinements = 6\nvariant = printed_volumetric\n");
    assert!(std.status.success() && vol.status.success());
    let a: f64 = csv_rows(&dir.path().join("s/block.csv"))[0][2].parse().unwrap();
    let b: f64 = csv_rows(&dir.path().join("v/block.csv"))[0][2].parse().unwrap();
    assert!((a - b).abs() > 0.05, "{a} {b}");

    let printed = polyvem(dir.path(), &["block", "--out", "p"], "refinements = 6\nvariant = as_printed\n");
    assert_eq!(printed.status.code(), Some(1));
    assert!(stderr(&printed).contains("larger N"), "{}", stderr(&printed));
    assert_eq!(csv_rows(&dir.path().join("p/block.csv"))[0][6], "failed");
}

#[test]
fn sub_yield_strip_is_elastic() {
    let dir = TempDir::new().unwrap();
    let o = polyvem(dir.path(), &["strip", "--out", "."], "refinements = 8\ndelta = 1e-6\nsteps = 2\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("strip.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][9], "ok");
    let gamma = csv_rows(&dir.path().join("gamma_quad_8.csv"));
    assert!(!gamma.is_empty());
    assert!(gamma.iter().all(|r| r[3].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn solve_on_a_mesh_file() {
    let dir = TempDir::new().unwrap();
    let mesh = "polymesh 2d\nv 0 0\nv 1 0\nv 2 0\nv 2 1\nv 1 1.2\nv 0 1\nc 0 1 4 5\nc 1 2 3 4\n\
                b 0 1 bottom\nb 1 2 bottom\nb 2 3 right\nb 3 4 top\nb 4 5 top\nb 5 0 left\n";
    fs::write(dir.path().join("two.mesh"), mesh).unwrap();
    let cfg = "study = solve\nlaw = linear\nmesh_file = two.mesh\nclamp = left\nforce = 0, -1\n";
    let o = polyvem(dir.path(), &["solve", "--out", "res"], cfg);
    assert!(o.status.success(), "{}", stderr(&o));
    let u = csv_rows(&dir.path().join("res/displacement.csv"));
    assert_eq!(u.len(), 6);
    assert_eq!(u[0][4].parse::<f64>().unwrap(), 0.0);
    assert!(u[3][4].parse::<f64>().unwrap() < 0.0);
    assert_eq!(csv_rows(&dir.path().join("res/stress.csv")).len(), 2);
}
