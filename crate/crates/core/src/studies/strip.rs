//! Quarter strip with a circular hole under prescribed top displacement (J2, plane strain).

use crate::constitutive::{J2Params, Law};
use crate::error::{Error, Result};
use crate::mesh::{PolyMesh, StripGeometry};
use crate::solver::{incremental_solve, AlphaMode, DisplacementField, LoadProgram, Model, NewtonOptions};
use crate::vem::AlphaNorm;

#[derive(Clone, Debug)]
pub struct StripSettings {
    pub geometry: StripGeometry,
    pub params: J2Params,
    /// Final vertical displacement of the top edge.
    pub delta: f64,
    pub steps: usize,
    pub alpha_mode: AlphaMode,
    pub alpha_norm: AlphaNorm,
    pub newton: NewtonOptions,
}

impl Default for StripSettings {
    fn default() -> Self {
        StripSettings {
            geometry: StripGeometry::default(),
            params: J2Params::default(),
            delta: 10.0,
            steps: 100,
            alpha_mode: AlphaMode::Updated,
            alpha_norm: AlphaNorm::MaxEntry,
            newton: NewtonOptions {
                line_search: true,
                ..NewtonOptions::default()
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct StripReport {
    pub n_h: usize,
    pub num_cells: usize,
    /// Vertical displacement at the top of the hole.
    pub displ_a: f64,
    /// Horizontal displacement at the side of the hole.
    pub displ_b: f64,
    /// Largest element stress norm.
    pub sigma_max: f64,
    /// Area-weighted sum of element stress norms.
    pub sigma_total: f64,
    pub gamma: Vec<f64>,
    pub centroids: Vec<[f64; 2]>,
    /// Largest |tr(plastic strain)| over the elements.
    pub max_plastic_trace: f64,
    pub steps_completed: usize,
    pub newton_iterations: usize,
    pub failure: Option<String>,
}

impl StripReport {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    /// `element,cx,cy,gamma` rows.
    pub fn gamma_csv(&self) -> String {
        let mut out = String::from("element,cx,cy,gamma\n");
        for (e, (c, g)) in self.centroids.iter().zip(&self.gamma).enumerate() {
            out.push_str(&format!("{e},{:.10e},{:.10e},{:.10e}\n", c[0], c[1], g));
        }
        out
    }
}

/// Runs the strip problem on `mesh`, which must carry the `sym_x`, `sym_y` and `top` labels.
///
/// A failing step still produces a report built from the last converged step.
pub fn solve_strip(mesh: &PolyMesh, settings: &StripSettings) -> Result<StripReport> {
    settings.params.validate()?;
    let tol = 1e-6 * settings.geometry.hole_radius;
    let find = |p: [f64; 2]| {
        mesh.find_vertex(p, tol)
            .ok_or_else(|| Error::InvalidInput(format!("strip mesh has no vertex at {p:?}")))
    };
    let a = find(settings.geometry.point_a())?;
    let b = find(settings.geometry.point_b())?;

    let mut constraints = DisplacementField::zeros(mesh.num_vertices());
    constraints.prescribe_label(mesh, "sym_x", 0, 0.0)?;
    constraints.prescribe_label(mesh, "sym_y", 1, 0.0)?;
    constraints.prescribe_label(mesh, "top", 1, settings.delta)?;
    let model = Model::new(mesh.clone(), Law::J2(settings.params.clone()), constraints)?
        .with_alpha_norm(settings.alpha_norm);
    let program = LoadProgram::new(settings.steps).with_alpha_mode(settings.alpha_mode);
    let history = incremental_solve(&model, &program, &settings.newton, false)?;

    let u = history.u.values();
    let geoms = model.geometries();
    let norms: Vec<f64> = history.stresses.iter().map(|s| s.norm()).collect();
    let states: Vec<_> = history.states.iter().map(|s| s.clone().unwrap_or_default()).collect();
    Ok(StripReport {
        n_h: mesh.num_vertices(),
        num_cells: mesh.num_cells(),
        displ_a: u[2 * a + 1],
        displ_b: u[2 * b],
        sigma_max: norms.iter().cloned().fold(0.0, f64::max),
        sigma_total: geoms.iter().zip(&norms).map(|(g, n)| g.area * n).sum(),
        gamma: states.iter().map(|s| s.gamma).collect(),
        centroids: geoms.iter().map(|g| g.centroid).collect(),
        max_plastic_trace: states.iter().map(|s| s.plastic_strain_trace().abs()).fold(0.0, f64::max),
        steps_completed: history.steps.len(),
        newton_iterations: history.total_iterations(),
        failure: history.failure.as_ref().map(|e| e.to_string()),
    })
}
