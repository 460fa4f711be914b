use crate::error::{Error, Result};
use crate::mesh::PolyMesh;

/// Nodal displacements together with the constraint table.
///
/// Dof `2 v + c` is component `c` of vertex `v`. A prescribed entry stores the value at
/// full load; [`apply_dirichlet`] writes `scale` times that value.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField {
    values: Vec<f64>,
    prescribed: Vec<Option<f64>>,
}

impl DisplacementField {
    pub fn zeros(num_vertices: usize) -> Self {
        DisplacementField {
            values: vec![0.0; 2 * num_vertices],
            prescribed: vec![None; 2 * num_vertices],
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.values.len() / 2
    }

    pub fn num_dofs(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vertex(&self, v: usize) -> [f64; 2] {
        [self.values[2 * v], self.values[2 * v + 1]]
    }

    pub fn prescribed(&self) -> &[Option<f64>] {
        &self.prescribed
    }

    pub fn is_free(&self, dof: usize) -> bool {
        self.prescribed[dof].is_none()
    }

    pub fn num_free(&self) -> usize {
        self.prescribed.iter().filter(|p| p.is_none()).count()
    }

    /// Fixes component `comp` of vertex `v` to `value` at full load.
    pub fn prescribe(&mut self, v: usize, comp: usize, value: f64) -> Result<()> {
        if comp > 1 || v >= self.num_vertices() {
            return Err(Error::InvalidInput(format!("no dof ({v}, {comp})")));
        }
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite prescribed value at ({v}, {comp})")));
        }
        self.prescribed[2 * v + comp] = Some(value);
        Ok(())
    }

    /// Prescribes both components of every boundary vertex from `g`.
    pub fn clamp_boundary(&mut self, mesh: &PolyMesh, g: impl Fn([f64; 2]) -> [f64; 2]) -> Result<()> {
        for v in mesh.boundary_vertices() {
            let d = g(mesh.vertices()[v]);
            self.prescribe(v, 0, d[0])?;
            self.prescribe(v, 1, d[1])?;
        }
        Ok(())
    }

    /// Prescribes `comp` on every vertex of edges carrying `label`.
    pub fn prescribe_label(&mut self, mesh: &PolyMesh, label: &str, comp: usize, value: f64) -> Result<()> {
        let verts = mesh.vertices_with_label(label);
        if verts.is_empty() {
            return Err(Error::InvalidInput(format!("no boundary edges labelled `{label}`")));
        }
        for v in verts {
            self.prescribe(v, comp, value)?;
        }
        Ok(())
    }

    /// Overwrites free components; prescribed ones are left alone.
    pub fn set_free(&mut self, dof: usize, value: f64) {
        if self.prescribed[dof].is_none() {
            self.values[dof] = value;
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Copies all values (free and prescribed) from a slice.
    pub fn with_values(mut self, values: &[f64]) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::InvalidInput("value vector has the wrong length".into()));
        }
        self.values.copy_from_slice(values);
        Ok(self)
    }
}

/// Sets every prescribed component to `scale` times its full-load value.
pub fn apply_dirichlet(field: &DisplacementField, scale: f64) -> DisplacementField {
    let mut out = field.clone();
    for (v, p) in out.values.iter_mut().zip(&out.prescribed) {
        if let Some(target) = p {
            *v = scale * target;
        }
    }
    out
}
