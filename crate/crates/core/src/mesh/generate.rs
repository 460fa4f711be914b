//! Structured mesh families on the unit square.

use std::str::FromStr;

use super::voronoi::{clipped_voronoi, polygons_to_mesh};
use super::{unit_square_label, Point, PolyMesh};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuredKind {
    /// `N x N` squares.
    Square,
    /// Congruent trapezoids similar to `(0,0), (1/2,0), (1/2,2/3), (0,1/3)`; `N` must be even.
    Trapezoid,
    /// Voronoi cells of a staggered lattice clipped to the square: hexagons inside,
    /// pentagons and quadrilaterals along the boundary.
    HexStructured,
    /// Non-convex hexagons: every interior vertical grid line is kinked at mid-height.
    Chevron,
}

impl FromStr for StructuredKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(StructuredKind::Square),
            "trapezoid" => Ok(StructuredKind::Trapezoid),
            "hex" | "hex_structured" => Ok(StructuredKind::HexStructured),
            "chevron" => Ok(StructuredKind::Chevron),
            other => Err(Error::InvalidParameter(format!("unknown mesh family `{other}`"))),
        }
    }
}

pub fn generate_structured(kind: StructuredKind, n: usize) -> Result<PolyMesh> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    match kind {
        StructuredKind::Square => square(n),
        StructuredKind::Trapezoid => trapezoid(n),
        StructuredKind::HexStructured => hex_structured(n),
        StructuredKind::Chevron => chevron(n),
    }
}

fn grid_cells(n: usize) -> Vec<Vec<usize>> {
    let id = |i: usize, r: usize| r * (n + 1) + i;
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            cells.push(vec![id(c, r), id(c + 1, r), id(c + 1, r + 1), id(c, r + 1)]);
        }
    }
    cells
}

fn square(n: usize) -> Result<PolyMesh> {
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for r in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * h, r as f64 * h]);
        }
    }
    PolyMesh::with_boundary_labels(vertices, grid_cells(n), unit_square_label)
}

fn trapezoid(n: usize) -> Result<PolyMesh> {
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "trapezoid meshes need an even N (got {n})"
        )));
    }
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for r in 0..=n {
        for i in 0..=n {
            let offset = if i % 2 == 0 { 2.0 / 3.0 } else { 4.0 / 3.0 } * h;
            let y = if r % 2 == 0 {
                r as f64 * h
            } else {
                (r - 1) as f64 * h + offset
            };
            vertices.push([i as f64 * h, y]);
        }
    }
    PolyMesh::with_boundary_labels(vertices, grid_cells(n), unit_square_label)
}

fn hex_structured(n: usize) -> Result<PolyMesh> {
    let h = 1.0 / n as f64;
    let mut seeds: Vec<Point> = Vec::new();
    for j in 0..=n {
        let y = j as f64 * h;
        if j % 2 == 0 {
            seeds.extend((0..=n).map(|i| [i as f64 * h, y]));
        } else {
            seeds.extend((0..n).map(|i| [(i as f64 + 0.5) * h, y]));
        }
    }
    let domain = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let polys = clipped_voronoi(&seeds, &domain);
    polygons_to_mesh(&polys, 1e-10 * h, unit_square_label)
}

fn chevron(n: usize) -> Result<PolyMesh> {
    let h = 1.0 / n as f64;
    let kink = 0.25 * h;
    let corner = |i: usize, r: usize| r * (n + 1) + i;
    let corners = (n + 1) * (n + 1);
    let mid = |i: usize, r: usize| corners + r * (n + 1) + i;
    let mut vertices = Vec::with_capacity(corners + n * (n + 1));
    for r in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * h, r as f64 * h]);
        }
    }
    for r in 0..n {
        for i in 0..=n {
            let shift = if i == 0 || i == n { 0.0 } else { kink };
            vertices.push([i as f64 * h + shift, (r as f64 + 0.5) * h]);
        }
    }
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            cells.push(vec![
                corner(c, r),
                corner(c + 1, r),
                mid(c + 1, r),
                corner(c + 1, r + 1),
                corner(c, r + 1),
                mid(c, r),
            ]);
        }
    }
    PolyMesh::with_boundary_labels(vertices, cells, unit_square_label)
}
