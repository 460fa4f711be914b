//! Neo-Hookean block clamped on the left side under a uniform horizontal body force.

use crate::constitutive::{Law, NeoHookeanVariant};
use crate::error::{Error, Result};
use crate::mesh::PolyMesh;
use crate::solver::{incremental_solve, AlphaMode, DisplacementField, LoadProgram, Model, NewtonOptions};
use crate::vem::AlphaNorm;

/// Material point whose displacement is reported.
pub const BLOCK_POINT: [f64; 2] = [1.0, 1.0];

#[derive(Clone, Debug)]
pub struct BlockSettings {
    pub mu: f64,
    pub lambda: f64,
    pub variant: NeoHookeanVariant,
    pub force: [f64; 2],
    pub steps: usize,
    pub alpha_mode: AlphaMode,
    pub alpha_norm: AlphaNorm,
    pub newton: NewtonOptions,
}

impl Default for BlockSettings {
    fn default() -> Self {
        BlockSettings {
            mu: 2.6316e4,
            lambda: 5.1086e4,
            variant: NeoHookeanVariant::Standard,
            force: [1.05e5, 0.0],
            steps: 20,
            alpha_mode: AlphaMode::Updated,
            alpha_norm: AlphaNorm::MaxEntry,
            newton: NewtonOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub n_h: usize,
    pub displacement_p: [f64; 2],
    pub u: Vec<f64>,
    pub steps_completed: usize,
    pub newton_iterations: usize,
    pub failure: Option<String>,
}

impl BlockReport {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `vertex,x,y,ux,uy` rows with the deformed position `x + u`.
pub fn deformed_csv(mesh: &PolyMesh, u: &[f64]) -> String {
    let mut out = String::from("vertex,x,y,ux,uy\n");
    for (v, p) in mesh.vertices().iter().enumerate() {
        let (ux, uy) = (u[2 * v], u[2 * v + 1]);
        out.push_str(&format!("{v},{:.10e},{:.10e},{:.10e},{:.10e}\n", p[0] + ux, p[1] + uy, ux, uy));
    }
    out
}

/// Solves the block on a mesh of the unit square with the `left` side clamped.
pub fn solve_block(mesh: &PolyMesh, settings: &BlockSettings) -> Result<BlockReport> {
    let p = mesh
        .find_vertex(BLOCK_POINT, 1e-9)
        .ok_or_else(|| Error::InvalidInput("block mesh has no vertex at (1, 1)".into()))?;
    let mut constraints = DisplacementField::zeros(mesh.num_vertices());
    constraints.prescribe_label(mesh, "left", 0, 0.0)?;
    constraints.prescribe_label(mesh, "left", 1, 0.0)?;
    let law = Law::NeoHookean {
        lambda: settings.lambda,
        mu: settings.mu,
        variant: settings.variant,
    };
    let model = Model::new(mesh.clone(), law, constraints)?.with_alpha_norm(settings.alpha_norm);
    let force = settings.force;
    let program = LoadProgram::new(settings.steps)
        .with_alpha_mode(settings.alpha_mode)
        .with_body_force(move |_| force);
    let history = incremental_solve(&model, &program, &settings.newton, false)?;
    let failure = history.failure.as_ref().map(|e| {
        if e.is_inverted_element() {
            format!("{e}; try a finer mesh (larger N) or more load steps")
        } else {
            e.to_string()
        }
    });
    let u = history.u.values().to_vec();
    Ok(BlockReport {
        n_h: mesh.num_vertices(),
        displacement_p: [u[2 * p], u[2 * p + 1]],
        u,
        steps_completed: history.steps.len(),
        newton_iterations: history.total_iterations(),
        failure,
    })
}
