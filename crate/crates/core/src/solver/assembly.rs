use rayon::prelude::*;

use super::field::DisplacementField;
use crate::constitutive::{Law, MaterialState};
use crate::error::{Error, Result};
use crate::mesh::{element_geometry, ElementGeometry, Point, PolyMesh};
use crate::tensor::Tensor2;
use crate::vem::{alpha_at_gradient, element_response, AlphaNorm, ProjectorPack};

/// Compressed-column pattern of the tangent restricted to free dofs.
#[derive(Clone, Debug)]
pub struct SparsePattern {
    pub n: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    /// Per element, the value slot of local entry `(a, b)` at `a * ndofs + b`.
    scatter: Vec<Vec<Option<usize>>>,
}

impl SparsePattern {
    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Value slot of global entry `(row, col)` if it is structurally present.
    pub fn slot(&self, row: usize, col: usize) -> Option<usize> {
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        self.row_idx[range.clone()].binary_search(&row).ok().map(|k| range.start + k)
    }
}

/// Result of one global assembly.
#[derive(Clone, Debug)]
pub struct SystemMatrices {
    /// Values in the slots of [`SparsePattern`], if the tangent was requested.
    pub tangent: Option<Vec<f64>>,
    /// Internal minus external forces on every dof.
    pub residual: Vec<f64>,
    /// Residual restricted to free dofs, in free-index order.
    pub residual_free: Vec<f64>,
    /// Sum of absolute contributions per free dof, a yardstick for roundoff.
    pub force_scale: Vec<f64>,
    /// Updated history per element (inelastic laws only).
    pub states: Vec<Option<MaterialState>>,
    pub stresses: Vec<Tensor2>,
    pub stress_zz: Vec<Option<f64>>,
}

/// Mesh, law and constraints with all displacement-independent element data.
#[derive(Clone, Debug)]
pub struct Model {
    mesh: PolyMesh,
    law: Law,
    geoms: Vec<ElementGeometry>,
    packs: Vec<ProjectorPack>,
    vertex_weights: Vec<f64>,
    constraints: DisplacementField,
    free_dofs: Vec<usize>,
    pattern: SparsePattern,
    alpha_norm: AlphaNorm,
}

fn cell_dofs(cell: &[usize]) -> Vec<usize> {
    cell.iter().flat_map(|&v| [2 * v, 2 * v + 1]).collect()
}

impl Model {
    /// `constraints` carries the prescribed table; its values are ignored.
    pub fn new(mesh: PolyMesh, law: Law, constraints: DisplacementField) -> Result<Self> {
        if constraints.num_vertices() != mesh.num_vertices() {
            return Err(Error::InvalidInput("constraint table does not match the mesh".into()));
        }
        let geoms = (0..mesh.num_cells())
            .map(|c| element_geometry(&mesh, c))
            .collect::<Result<Vec<_>>>()?;
        let packs = geoms
            .iter()
            .map(|g| ProjectorPack::new(g).map_err(|e| e.in_element(g.cell)))
            .collect::<Result<Vec<_>>>()?;
        let mut vertex_weights = vec![0.0; mesh.num_vertices()];
        for (cell, pack) in mesh.cells().iter().zip(&packs) {
            for (&v, w) in cell.iter().zip(&pack.load_weights) {
                vertex_weights[v] += w;
            }
        }
        let mut free_index = vec![None; constraints.num_dofs()];
        let mut free_dofs = Vec::new();
        for (d, slot) in free_index.iter_mut().enumerate() {
            if constraints.is_free(d) {
                *slot = Some(free_dofs.len());
                free_dofs.push(d);
            }
        }
        let pattern = build_pattern(&mesh, &free_index, free_dofs.len());
        Ok(Model {
            mesh,
            law,
            geoms,
            packs,
            vertex_weights,
            constraints,
            free_dofs,
            pattern,
            alpha_norm: AlphaNorm::default(),
        })
    }

    pub fn with_alpha_norm(mut self, norm: AlphaNorm) -> Self {
        self.alpha_norm = norm;
        self
    }

    pub fn mesh(&self) -> &PolyMesh {
        &self.mesh
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn geometries(&self) -> &[ElementGeometry] {
        &self.geoms
    }

    pub fn packs(&self) -> &[ProjectorPack] {
        &self.packs
    }

    pub fn pattern(&self) -> &SparsePattern {
        &self.pattern
    }

    pub fn constraints(&self) -> &DisplacementField {
        &self.constraints
    }

    pub fn free_dofs(&self) -> &[usize] {
        &self.free_dofs
    }

    pub fn num_free(&self) -> usize {
        self.free_dofs.len()
    }

    pub fn alpha_norm(&self) -> AlphaNorm {
        self.alpha_norm
    }

    /// Quadrature weight attached to each vertex (sum over adjacent elements).
    pub fn vertex_weights(&self) -> &[f64] {
        &self.vertex_weights
    }

    /// Field of zeros carrying this model's constraint table.
    pub fn zero_field(&self) -> DisplacementField {
        let n = self.constraints.num_dofs();
        self.constraints.clone().with_values(&vec![0.0; n]).expect("same length")
    }

    /// Full-load external force vector for a body force sampled at the vertices.
    pub fn load_vector(&self, f: &(dyn Fn(Point) -> [f64; 2] + Sync)) -> Vec<f64> {
        let mut load = vec![0.0; self.constraints.num_dofs()];
        for (v, (x, w)) in self.mesh.vertices().iter().zip(&self.vertex_weights).enumerate() {
            let fv = f(*x);
            load[2 * v] = w * fv[0];
            load[2 * v + 1] = w * fv[1];
        }
        load
    }

    /// Full-load external force vector from body-force values given per vertex.
    pub fn load_vector_from_samples(&self, forces: &[[f64; 2]]) -> Result<Vec<f64>> {
        if forces.len() != self.mesh.num_vertices() {
            return Err(Error::InvalidInput("one body-force sample per vertex is required".into()));
        }
        Ok(forces
            .iter()
            .zip(&self.vertex_weights)
            .flat_map(|(f, w)| [w * f[0], w * f[1]])
            .collect())
    }

    pub fn initial_states(&self) -> Vec<Option<MaterialState>> {
        vec![self.law.initial_state(); self.mesh.num_cells()]
    }

    pub fn element_values(&self, cell: usize, u: &[f64]) -> Vec<f64> {
        self.mesh.cells()[cell].iter().flat_map(|&v| [u[2 * v], u[2 * v + 1]]).collect()
    }

    /// Stabilization scale of every element at the configuration `s`.
    pub fn alphas(&self, s: &[f64], states: &[Option<MaterialState>]) -> Result<Vec<f64>> {
        (0..self.mesh.num_cells())
            .into_par_iter()
            .map(|c| {
                let grad = self.packs[c].grad(&self.element_values(c, s));
                alpha_at_gradient(&self.law, states[c].as_ref(), &grad, self.alpha_norm).map_err(|e| e.in_element(c))
            })
            .collect()
    }

    /// Global residual and (optionally) tangent at `u`.
    ///
    /// `load` is the external force vector already scaled to the current step.
    pub fn assemble(
        &self,
        u: &[f64],
        alphas: &[f64],
        states: &[Option<MaterialState>],
        u_old: Option<&[f64]>,
        load: &[f64],
        with_tangent: bool,
    ) -> Result<SystemMatrices> {
        let ncell = self.mesh.num_cells();
        if u.len() != self.constraints.num_dofs() || alphas.len() != ncell || states.len() != ncell {
            return Err(Error::InvalidInput("assembly inputs do not match the model".into()));
        }
        let locals: Vec<Result<_>> = (0..ncell)
            .into_par_iter()
            .map(|c| {
                let ue = self.element_values(c, u);
                let old = u_old.map(|o| self.element_values(c, o));
                element_response(
                    &self.law,
                    &self.packs[c],
                    &ue,
                    alphas[c],
                    states[c].as_ref(),
                    old.as_deref(),
                    with_tangent,
                )
                .map_err(|e| e.in_element(c))
            })
            .collect();

        let ndof = self.constraints.num_dofs();
        let mut residual: Vec<f64> = load.iter().map(|f| -f).collect();
        let mut abs_sum: Vec<f64> = load.iter().map(|f| f.abs()).collect();
        let mut tangent = with_tangent.then(|| vec![0.0; self.pattern.nnz()]);
        let mut new_states = Vec::with_capacity(ncell);
        let mut stresses = Vec::with_capacity(ncell);
        let mut stress_zz = Vec::with_capacity(ncell);
        for (c, local) in locals.into_iter().enumerate() {
            let r = local?;
            let dofs = cell_dofs(&self.mesh.cells()[c]);
            for (a, &da) in dofs.iter().enumerate() {
                residual[da] += r.force[a];
                abs_sum[da] += r.force[a].abs();
            }
            if let (Some(vals), Some(k)) = (tangent.as_mut(), r.tangent.as_ref()) {
                let nd = dofs.len();
                for (slot, &pos) in self.pattern.scatter[c].iter().enumerate() {
                    if let Some(p) = pos {
                        vals[p] += k[(slot / nd, slot % nd)];
                    }
                }
            }
            new_states.push(r.new_state);
            stresses.push(r.stress);
            stress_zz.push(r.stress_zz);
        }
        debug_assert_eq!(residual.len(), ndof);
        let residual_free = self.free_dofs.iter().map(|&d| residual[d]).collect();
        let force_scale = self.free_dofs.iter().map(|&d| abs_sum[d]).collect();
        Ok(SystemMatrices {
            tangent,
            residual,
            residual_free,
            force_scale,
            states: new_states,
            stresses,
            stress_zz,
        })
    }
}

fn build_pattern(mesh: &PolyMesh, free_index: &[Option<usize>], n: usize) -> SparsePattern {
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    for cell in mesh.cells() {
        let free: Vec<usize> = cell_dofs(cell).iter().filter_map(|&d| free_index[d]).collect();
        for &c in &free {
            cols[c].extend_from_slice(&free);
        }
    }
    let mut col_ptr = Vec::with_capacity(n + 1);
    let mut row_idx = Vec::new();
    col_ptr.push(0);
    for col in &mut cols {
        col.sort_unstable();
        col.dedup();
        row_idx.extend_from_slice(col);
        col_ptr.push(row_idx.len());
    }
    let mut pattern = SparsePattern {
        n,
        col_ptr,
        row_idx,
        scatter: Vec::with_capacity(mesh.num_cells()),
    };
    for cell in mesh.cells() {
        let dofs = cell_dofs(cell);
        let mut map = Vec::with_capacity(dofs.len() * dofs.len());
        for &da in &dofs {
            for &db in &dofs {
                map.push(match (free_index[da], free_index[db]) {
                    (Some(r), Some(c)) => pattern.slot(r, c),
                    _ => None,
                });
            }
        }
        pattern.scatter.push(map);
    }
    pattern
}
