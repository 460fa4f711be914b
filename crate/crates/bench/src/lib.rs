//! Fixtures shared by the benchmarks.

use polyvem::mesh::{generate_structured, StructuredKind};
use polyvem::solver::{DisplacementField, Model};
use polyvem::{constitutive::Law, ElementGeometry, PolyMesh};

/// Regular polygon with `n` vertices on the unit circle.
pub fn regular_polygon(n: usize) -> ElementGeometry {
    let coords = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    ElementGeometry::from_polygon(coords, 0).expect("regular polygons are valid")
}

/// Smooth nodal field of small amplitude on `mesh`.
pub fn smooth_field(mesh: &PolyMesh, amp: f64) -> Vec<f64> {
    mesh.vertices()
        .iter()
        .flat_map(|x| [amp * (3.0 * x[0] + x[1]).sin(), amp * (x[0] * x[1] - x[1]).cos()])
        .collect()
}

/// `kind` grid of the unit square with the whole boundary clamped.
pub fn clamped_model(kind: StructuredKind, n: usize, law: Law) -> Model {
    let mesh = generate_structured(kind, n).expect("valid refinement");
    let mut c = DisplacementField::zeros(mesh.num_vertices());
    c.clamp_boundary(&mesh, |_| [0.0, 0.0]).expect("boundary vertices exist");
    Model::new(mesh, law, c).expect("valid mesh")
}
