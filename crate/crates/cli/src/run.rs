//! Study runners: each writes its files under the output directory and counts failed rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use polyvem::analysis::{convergence_rows, ManufacturedCase, CONVERGENCE_CSV_HEADER};
use polyvem::mesh::{load_mesh, quarter_strip_mesh, serialize_mesh, StripGeometry};
use polyvem::solver::{incremental_solve, DisplacementField, LoadProgram, Model};
use polyvem::studies::{
    alpha_comparison, alpha_comparison_csv, deformed_csv, solve_block, solve_manufactured, solve_strip,
    ManufacturedSettings, StripSettings,
};
use polyvem::PolyMesh;

use crate::config::StudyConfig;

#[derive(Debug, Default)]
pub struct Outcome {
    pub failed_rows: usize,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path);
        Ok(())
    }

    fn fail(&mut self, what: &str, err: impl std::fmt::Display) {
        eprintln!("{what}: {err}");
        self.failed_rows += 1;
    }
}

fn mesh_from_file(path: &Path) -> Result<PolyMesh> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_mesh(&text).with_context(|| format!("loading {}", path.display()))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.4}"))
}

pub fn convergence(cfg: &StudyConfig, out: &Path) -> Result<Outcome> {
    let name = cfg.case.as_deref().ok_or_else(|| anyhow!("a convergence study needs `case`"))?;
    let mut case = ManufacturedCase::from_name(name)?;
    if let Some(law) = cfg.law()? {
        case = case.with_law(law);
    }
    let levels = cfg.refinements.as_ref().ok_or_else(|| anyhow!("a convergence study needs `refinements`"))?;
    let settings = ManufacturedSettings {
        steps: cfg.steps.unwrap_or(10),
        alpha_mode: cfg.alpha,
        alpha_norm: cfg.alpha_norm,
        newton: cfg.newton(false),
    };
    let mut outcome = Outcome::default();
    let mut meshes = Vec::new();
    let mut results = Vec::new();
    for &n in levels {
        let mesh = cfg.family.build(n, cfg.seed)?;
        outcome.write(out, &format!("mesh_{}_{n}.mesh", cfg.family), &serialize_mesh(&mesh))?;
        match solve_manufactured(&case, &mesh, &settings) {
            Ok((_, e)) => results.push((mesh.num_vertices(), Some(e))),
            Err(err) => {
                outcome.fail(&format!("{} N={n}", cfg.family), err);
                results.push((mesh.num_vertices(), None));
            }
        }
        meshes.push(mesh);
    }

    let solved: Vec<_> = results.iter().filter_map(|(_, e)| e.as_ref()).map(|e| (e.n_h, e.e_0inf, e.e_12)).collect();
    let rows = if solved.is_empty() { Vec::new() } else { convergence_rows(&solved)? };
    let mut csv = format!("{CONVERGENCE_CSV_HEADER},E_rel_inf\n");
    let mut rows_iter = rows.iter();
    for (n_h, e) in &results {
        match (e, e.as_ref().and_then(|_| rows_iter.next())) {
            (Some(e), Some(r)) => {
                let _ = writeln!(
                    csv,
                    "{},{:.6e},{},{:.6e},{},{:.6e}",
                    r.n_h,
                    r.e_0inf,
                    opt(r.r_0inf),
                    r.e_12,
                    opt(r.r_12),
                    e.e_rel_inf
                );
            }
            _ => {
                let _ = writeln!(csv, "{n_h},failed,-,failed,-,failed");
            }
        }
    }
    print!("{csv}");
    outcome.write(out, &format!("convergence_{}_{}.csv", case.name, cfg.family), &csv)?;

    if matches!(name, "case1" | "case2") {
        let rows = alpha_comparison(&case, &meshes, &settings)?;
        for r in &rows {
            if r.updated.is_none() || r.fixed.is_none() {
                outcome.fail(&format!("alpha comparison N_h={}", r.n_h), "solve failed");
            }
        }
        let csv = alpha_comparison_csv(&rows);
        print!("{csv}");
        outcome.write(out, &format!("alpha_{}_{}.csv", case.name, cfg.family), &csv)?;
    }
    Ok(outcome)
}

pub fn strip(cfg: &StudyConfig, out: &Path) -> Result<Outcome> {
    let d = StripSettings::default();
    let settings = StripSettings {
        params: cfg.j2_params(),
        delta: cfg.delta.unwrap_or(d.delta),
        steps: cfg.steps.unwrap_or(d.steps),
        alpha_mode: cfg.alpha,
        alpha_norm: cfg.alpha_norm,
        newton: cfg.newton(true),
        ..d
    };
    let geom = StripGeometry::default();
    let mut runs: Vec<(String, PolyMesh)> = Vec::new();
    if let Some(path) = &cfg.mesh_file {
        runs.push(("file".into(), mesh_from_file(path)?));
    } else {
        let levels = cfg.refinements.clone().unwrap_or_else(|| vec![32, 64, 128]);
        for &n in &levels {
            runs.push((format!("quad_{n}"), quarter_strip_mesh(&geom, n, false)?));
        }
        if cfg.reference {
            let n = *levels.last().expect("refinement lists are non-empty");
            runs.push((format!("tri_{n}"), quarter_strip_mesh(&geom, n, true)?));
        }
    }

    let mut outcome = Outcome::default();
    let mut csv = String::from("mesh,N_h,cells,displ_A,displ_B,sigma_max,sigma_T,steps,newton_iterations,status\n");
    for (label, mesh) in &runs {
        outcome.write(out, &format!("mesh_{label}.mesh"), &serialize_mesh(mesh))?;
        let r = solve_strip(mesh, &settings)?;
        let status = match &r.failure {
            None => "ok".to_string(),
            Some(f) => {
                outcome.fail(&format!("strip {label}"), f);
                "failed".to_string()
            }
        };
        let _ = writeln!(
            csv,
            "{label},{},{},{:.8e},{:.8e},{:.8e},{:.8e},{},{},{status}",
            r.n_h, r.num_cells, r.displ_a, r.displ_b, r.sigma_max, r.sigma_total, r.steps_completed, r.newton_iterations
        );
        outcome.write(out, &format!("gamma_{label}.csv"), &r.gamma_csv())?;
    }
    print!("{csv}");
    outcome.write(out, "strip.csv", &csv)?;
    Ok(outcome)
}

pub fn block(cfg: &StudyConfig, out: &Path) -> Result<Outcome> {
    let settings = cfg.block_settings();
    let mut runs: Vec<(String, PolyMesh)> = Vec::new();
    if let Some(path) = &cfg.mesh_file {
        runs.push(("file".into(), mesh_from_file(path)?));
    } else {
        for &n in cfg.refinements.as_deref().unwrap_or(&[6, 13, 27, 54]) {
            runs.push((n.to_string(), cfg.family.build(n, cfg.seed)?));
        }
    }
    let mut outcome = Outcome::default();
    let mut csv = String::from("mesh,N_h,ux_P,uy_P,steps,newton_iterations,status\n");
    for (label, mesh) in &runs {
        let r = solve_block(mesh, &settings)?;
        let status = match &r.failure {
            None => "ok",
            Some(f) => {
                outcome.fail(&format!("block {label}"), f);
                "failed"
            }
        };
        let _ = writeln!(
            csv,
            "{label},{},{:.8e},{:.8e},{},{},{status}",
            r.n_h, r.displacement_p[0], r.displacement_p[1], r.steps_completed, r.newton_iterations
        );
        outcome.write(out, &format!("deformed_{label}.csv"), &deformed_csv(mesh, &r.u))?;
    }
    print!("{csv}");
    outcome.write(out, "block.csv", &csv)?;
    Ok(outcome)
}

pub fn solve(cfg: &StudyConfig, out: &Path) -> Result<Outcome> {
    let law = cfg.law()?.ok_or_else(|| anyhow!("a single solve needs `law`"))?;
    let mesh = match (&cfg.mesh_file, cfg.refinements.as_deref()) {
        (Some(path), _) => mesh_from_file(path)?,
        (None, Some([n])) => cfg.family.build(*n, cfg.seed)?,
        (None, Some(_)) => bail!("a single solve takes one refinement level"),
        (None, None) => bail!("a single solve needs `mesh_file` or `refinements`"),
    };
    let mut constraints = DisplacementField::zeros(mesh.num_vertices());
    if cfg.clamp.is_empty() || cfg.clamp == ["all"] {
        constraints.clamp_boundary(&mesh, |_| [0.0, 0.0])?;
    } else {
        for label in &cfg.clamp {
            constraints.prescribe_label(&mesh, label, 0, 0.0)?;
            constraints.prescribe_label(&mesh, label, 1, 0.0)?;
        }
    }
    let model = Model::new(mesh.clone(), law, constraints)?.with_alpha_norm(cfg.alpha_norm);
    let force = cfg.force.unwrap_or([0.0, 0.0]);
    let program = LoadProgram::new(cfg.steps.unwrap_or(1))
        .with_alpha_mode(cfg.alpha)
        .with_body_force(move |_| force);
    let history = incremental_solve(&model, &program, &cfg.newton(false), false)?;

    let mut outcome = Outcome::default();
    if let Some(e) = &history.failure {
        outcome.fail("solve", e);
    }
    outcome.write(out, "mesh.mesh", &serialize_mesh(&mesh))?;
    outcome.write(out, "displacement.csv", &deformed_csv(&mesh, history.u.values()))?;
    let mut csv = String::from("element,cx,cy,s_xx,s_xy,s_yx,s_yy,s_zz\n");
    for (e, (g, s)) in model.geometries().iter().zip(&history.stresses).enumerate() {
        let zz = history.stress_zz[e].map_or_else(|| "-".into(), |v| format!("{v:.10e}"));
        let _ = writeln!(
            csv,
            "{e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{zz}",
            g.centroid[0], g.centroid[1], s.0[0][0], s.0[0][1], s.0[1][0], s.0[1][1]
        );
    }
    outcome.write(out, "stress.csv", &csv)?;
    let umax = history.u.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
    println!(
        "N_h={} cells={} steps={} newton_iterations={} max|u|={umax:.6e} status={}",
        mesh.num_vertices(),
        mesh.num_cells(),
        history.steps.len(),
        history.total_iterations(),
        if history.completed() { "ok" } else { "failed" }
    );
    Ok(outcome)
}
