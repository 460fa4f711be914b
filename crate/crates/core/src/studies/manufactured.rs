use crate::analysis::{convergence_rows, error_0_inf, error_1_2, relative_error_inf, ConvergenceRow, ManufacturedCase};
use crate::error::{Error, Result};
use crate::mesh::PolyMesh;
use crate::solver::{incremental_solve, AlphaMode, DisplacementField, LoadProgram, Model, NewtonOptions, SolveHistory};
use crate::vem::AlphaNorm;

/// Errors of one manufactured solve.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedErrors {
    pub n_h: usize,
    pub e_0inf: f64,
    pub e_12: f64,
    /// Sup-norm error relative to the largest nodal exact component.
    pub e_rel_inf: f64,
    pub newton_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct ManufacturedSettings {
    pub steps: usize,
    pub alpha_mode: AlphaMode,
    pub alpha_norm: AlphaNorm,
    pub newton: NewtonOptions,
}

impl Default for ManufacturedSettings {
    fn default() -> Self {
        ManufacturedSettings {
            steps: 10,
            alpha_mode: AlphaMode::Updated,
            alpha_norm: AlphaNorm::MaxEntry,
            newton: NewtonOptions::default(),
        }
    }
}

/// Solves the case on `mesh` with the exact solution prescribed on the whole boundary.
pub fn solve_manufactured(
    case: &ManufacturedCase,
    mesh: &PolyMesh,
    settings: &ManufacturedSettings,
) -> Result<(SolveHistory, ManufacturedErrors)> {
    let mut constraints = DisplacementField::zeros(mesh.num_vertices());
    constraints.clamp_boundary(mesh, |x| case.displacement(x))?;
    let model = Model::new(mesh.clone(), case.law.clone(), constraints)?.with_alpha_norm(settings.alpha_norm);

    // the body force is sampled once per vertex; failures surface before the solve
    let forces = mesh
        .vertices()
        .iter()
        .map(|&x| case.body_force(x))
        .collect::<Result<Vec<_>>>()?;
    let program = LoadProgram::new(settings.steps)
        .with_alpha_mode(settings.alpha_mode)
        .with_vertex_forces(forces);
    let history = incremental_solve(&model, &program, &settings.newton, false)?.into_result()?;
    let uh = history.u.values();
    let errors = ManufacturedErrors {
        n_h: mesh.num_vertices(),
        e_0inf: error_0_inf(mesh, uh, |x| case.displacement(x)),
        e_12: error_1_2(mesh, uh, |x| case.gradient(x)),
        e_rel_inf: relative_error_inf(mesh, uh, |x| case.displacement(x))?,
        newton_iterations: history.total_iterations(),
    };
    Ok((history, errors))
}

/// Rows of a refinement study; fails on the first mesh that fails.
pub fn convergence_table(errors: &[ManufacturedErrors]) -> Result<Vec<ConvergenceRow>> {
    if errors.is_empty() {
        return Err(Error::InvalidConfig("empty refinement list".into()));
    }
    convergence_rows(&errors.iter().map(|e| (e.n_h, e.e_0inf, e.e_12)).collect::<Vec<_>>())
}

/// Relative sup errors of the updated and fixed stabilization on one mesh.
///
/// A failed solve leaves its entry empty instead of aborting the comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaComparisonRow {
    pub n_h: usize,
    pub updated: Option<f64>,
    pub fixed: Option<f64>,
}

pub const ALPHA_COMPARISON_CSV_HEADER: &str = "N_h,E_inf_updated,E_inf_fixed";

pub fn alpha_comparison(
    case: &ManufacturedCase,
    meshes: &[PolyMesh],
    settings: &ManufacturedSettings,
) -> Result<Vec<AlphaComparisonRow>> {
    if meshes.is_empty() {
        return Err(Error::InvalidConfig("empty refinement list".into()));
    }
    let run = |mesh: &PolyMesh, mode: AlphaMode| {
        let s = ManufacturedSettings {
            alpha_mode: mode,
            ..settings.clone()
        };
        solve_manufactured(case, mesh, &s).ok().map(|(_, e)| e.e_rel_inf)
    };
    Ok(meshes
        .iter()
        .map(|m| AlphaComparisonRow {
            n_h: m.num_vertices(),
            updated: run(m, AlphaMode::Updated),
            fixed: run(m, AlphaMode::FixedInitial),
        })
        .collect())
}

pub fn alpha_comparison_csv(rows: &[AlphaComparisonRow]) -> String {
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
    let mut out = format!("{ALPHA_COMPARISON_CSV_HEADER}\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n_h, cell(r.updated), cell(r.fixed)));
    }
    out
}
