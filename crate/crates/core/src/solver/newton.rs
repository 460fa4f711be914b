use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::assembly::Model;
use super::field::{apply_dirichlet, DisplacementField};
use super::linear::LinearSolver;
use crate::constitutive::MaterialState;
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::tensor::Tensor2;

/// Residual reduction below which a Newton iterate counts as converged when the relative
/// test is out of reach: a small multiple of machine epsilon times the magnitude of the
/// forces summed into each residual entry.
const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Sufficient-decrease factor of the backtracking line search.
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1.0 / 64.0;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_iterations: usize,
    /// Halve the Newton step while the residual does not decrease (also on element inversion).
    pub line_search: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol_rel: 1e-10,
            tol_abs: 1e-12,
            max_iterations: 25,
            line_search: false,
        }
    }
}

/// How the stabilization scale is chosen at each load step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum AlphaMode {
    /// Re-evaluated at the previous converged step.
    #[default]
    Updated,
    /// Evaluated once at the undeformed state.
    FixedInitial,
    /// One value for every element.
    Constant(f64),
}

impl FromStr for AlphaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "updated" => Ok(AlphaMode::Updated),
            "fixed" => Ok(AlphaMode::FixedInitial),
            other => match other.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(AlphaMode::Constant(v)),
                _ => Err(Error::InvalidParameter(format!(
                    "alpha mode must be `updated`, `fixed` or a positive number (got `{other}`)"
                ))),
            },
        }
    }
}

pub type BodyForce = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// Incremental loading: at step `n` of `steps` both the body force and the prescribed
/// displacements are scaled by `n / steps`.
#[derive(Clone)]
pub struct LoadProgram {
    pub steps: usize,
    pub body_force: Option<BodyForce>,
    /// Body force already sampled at every mesh vertex; takes precedence over `body_force`.
    pub vertex_forces: Option<Arc<Vec<[f64; 2]>>>,
    pub alpha_mode: AlphaMode,
}

impl fmt::Debug for LoadProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoadProgram")
            .field("steps", &self.steps)
            .field("body_force", &self.body_force.is_some())
            .field("vertex_forces", &self.vertex_forces.is_some())
            .field("alpha_mode", &self.alpha_mode)
            .finish()
    }
}

impl LoadProgram {
    pub fn new(steps: usize) -> Self {
        LoadProgram {
            steps,
            body_force: None,
            vertex_forces: None,
            alpha_mode: AlphaMode::Updated,
        }
    }

    pub fn with_body_force(mut self, f: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.body_force = Some(Arc::new(f));
        self
    }

    pub fn with_vertex_forces(mut self, forces: Vec<[f64; 2]>) -> Self {
        self.vertex_forces = Some(Arc::new(forces));
        self
    }

    pub fn with_alpha_mode(mut self, mode: AlphaMode) -> Self {
        self.alpha_mode = mode;
        self
    }

    pub fn scale(&self, step: usize) -> f64 {
        if step == self.steps {
            1.0
        } else {
            step as f64 / self.steps as f64
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter("a load program needs at least one step".into()));
        }
        Ok(())
    }
}

/// Converged Newton iterate.
#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub u: DisplacementField,
    pub states: Vec<Option<MaterialState>>,
    pub stresses: Vec<Tensor2>,
    pub stress_zz: Vec<Option<f64>>,
    /// Free-residual norm at each iterate, starting with the initial guess.
    pub log: Vec<f64>,
}

impl NewtonOutcome {
    pub fn iterations(&self) -> usize {
        self.log.len() - 1
    }
}

/// One load step of Newton's method with the stabilization scales `alphas` frozen.
///
/// `u_init` must already hold the step's prescribed values. `states` and `u_old` are
/// the committed history of the previous step.
pub fn newton_solve(
    model: &Model,
    u_init: DisplacementField,
    alphas: &[f64],
    states: &[Option<MaterialState>],
    u_old: Option<&[f64]>,
    load: &[f64],
    opts: &NewtonOptions,
    solver: &mut LinearSolver,
) -> Result<NewtonOutcome> {
    let mut u = u_init;
    let mut log = Vec::new();
    let mut r0 = None;
    let mut last: Option<LastStep> = None;
    loop {
        let sys = match model.assemble(u.values(), alphas, states, u_old, load, true) {
            Ok(sys) => sys,
            Err(e) if opts.line_search && e.is_inverted_element() => match last.as_mut().filter(|s| s.t > MIN_STEP) {
                Some(step) => {
                    step.shorten(model, &mut u);
                    continue;
                }
                None => return Err(e),
            },
            Err(e) => return Err(e),
        };
        let norm = l2(&sys.residual_free);
        let floor = ROUNDOFF_FLOOR * l2(&sys.force_scale);
        log.push(norm);
        let r0 = *r0.get_or_insert(norm);
        if norm <= opts.tol_rel * r0 + opts.tol_abs || norm <= floor {
            return Ok(NewtonOutcome {
                u,
                states: sys.states,
                stresses: sys.stresses,
                stress_zz: sys.stress_zz,
                log,
            });
        }
        if log.len() > opts.max_iterations {
            return Err(Error::NonConvergence {
                iterations: log.len() - 1,
                last: norm,
                log,
            });
        }
        // backtrack when the full step did not reduce the residual enough
        if let Some(step) = last.as_mut().filter(|_| opts.line_search) {
            if !(norm <= (1.0 - ARMIJO * step.t) * step.base_norm) && step.t > MIN_STEP {
                step.shorten(model, &mut u);
                continue;
            }
        }
        if !norm.is_finite() {
            return Err(Error::NonConvergence {
                iterations: log.len() - 1,
                last: norm,
                log,
            });
        }
        let mut du: Vec<f64> = sys.residual_free.iter().map(|r| -r).collect();
        solver.solve(model.pattern(), sys.tangent.as_deref().expect("tangent requested"), &mut du)?;
        let base = u.values().to_vec();
        let values = u.values_mut();
        for (&d, delta) in model.free_dofs().iter().zip(&du) {
            values[d] += delta;
        }
        last = Some(LastStep {
            base,
            base_norm: norm,
            dir: du,
            t: 1.0,
        });
    }
}

/// Newton update taken from the last accepted iterate.
struct LastStep {
    base: Vec<f64>,
    base_norm: f64,
    /// Direction on the free dofs.
    dir: Vec<f64>,
    t: f64,
}

impl LastStep {
    fn shorten(&mut self, model: &Model, u: &mut DisplacementField) {
        self.t *= 0.5;
        let values = u.values_mut();
        values.copy_from_slice(&self.base);
        for (&d, delta) in model.free_dofs().iter().zip(&self.dir) {
            values[d] += self.t * delta;
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// What one converged load step produced.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: usize,
    pub scale: f64,
    pub log: Vec<f64>,
    /// Nodal values, only when fields are kept.
    pub values: Option<Vec<f64>>,
}

#[derive(Debug)]
pub struct SolveHistory {
    /// Last converged field (the zero field if no step converged).
    pub u: DisplacementField,
    pub states: Vec<Option<MaterialState>>,
    pub stresses: Vec<Tensor2>,
    pub stress_zz: Vec<Option<f64>>,
    pub steps: Vec<StepRecord>,
    /// Error that aborted the run, wrapped with its step number.
    pub failure: Option<Error>,
}

impl SolveHistory {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn into_result(self) -> Result<SolveHistory> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    pub fn total_iterations(&self) -> usize {
        self.steps.iter().map(|s| s.log.len() - 1).sum()
    }
}

/// Runs the load program from the zero field, committing history once per converged step.
pub fn incremental_solve(model: &Model, program: &LoadProgram, opts: &NewtonOptions, keep_fields: bool) -> Result<SolveHistory> {
    program.validate()?;
    let full_load = match (&program.vertex_forces, &program.body_force) {
        (Some(f), _) => model.load_vector_from_samples(f)?,
        (None, Some(f)) => model.load_vector(f.as_ref()),
        (None, None) => vec![0.0; model.constraints().num_dofs()],
    };
    let mut u = model.zero_field();
    let mut states = model.initial_states();
    let ncell = model.mesh().num_cells();
    let mut history = SolveHistory {
        u: u.clone(),
        states: states.clone(),
        stresses: vec![Tensor2::ZERO; ncell],
        stress_zz: vec![None; ncell],
        steps: Vec::with_capacity(program.steps),
        failure: None,
    };
    let fixed_alphas = match program.alpha_mode {
        AlphaMode::Updated => None,
        AlphaMode::FixedInitial => Some(model.alphas(u.values(), &states)?),
        AlphaMode::Constant(a) => Some(vec![a; ncell]),
    };
    let mut solver = LinearSolver::new(model.law().has_symmetric_tangent());

    for step in 1..=program.steps {
        let scale = program.scale(step);
        let alphas = match &fixed_alphas {
            Some(a) => a.clone(),
            None => match model.alphas(u.values(), &states) {
                Ok(a) => a,
                Err(e) => {
                    history.failure = Some(step_failure(step, e));
                    return Ok(history);
                }
            },
        };
        let load: Vec<f64> = full_load.iter().map(|f| scale * f).collect();
        let init = apply_dirichlet(&u, scale);
        let u_old = model.law().is_inelastic().then(|| u.values().to_vec());
        match newton_solve(model, init, &alphas, &states, u_old.as_deref(), &load, opts, &mut solver) {
            Ok(out) => {
                u = out.u;
                if model.law().is_inelastic() {
                    states = out.states;
                }
                history.steps.push(StepRecord {
                    step,
                    scale,
                    log: out.log,
                    values: keep_fields.then(|| u.values().to_vec()),
                });
                history.u = u.clone();
                history.states = states.clone();
                history.stresses = out.stresses;
                history.stress_zz = out.stress_zz;
            }
            Err(e) => {
                history.failure = Some(step_failure(step, e));
                return Ok(history);
            }
        }
    }
    Ok(history)
}

fn step_failure(step: usize, e: Error) -> Error {
    Error::StepFailure {
        step,
        source: Box::new(e),
    }
}
