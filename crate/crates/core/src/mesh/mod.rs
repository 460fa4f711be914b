//! Polygonal meshes: representation, validation, generators, geometry and quality checks.

mod generate;
pub(crate) mod geometry;
mod io;
pub(crate) mod quality;
mod strip;
mod voronoi;

pub use generate::{generate_structured, StructuredKind};
pub use geometry::{element_geometry, polygon_area, EdgeGeometry, ElementGeometry};
pub use io::{load_mesh, serialize_mesh};
pub use quality::{validate, ElementQuality, MeshQualityReport};
pub use strip::{quarter_strip_mesh, StripGeometry};
pub use voronoi::{clipped_voronoi, lloyd_relax, polygons_to_mesh, voronoi_mesh, VoronoiOptions};

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub label: String,
}

/// Which record of a mesh a validation failure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum MeshItem {
    Vertex(usize),
    Cell(usize),
    Boundary(usize),
    Global,
}

#[derive(Clone, Debug)]
pub(crate) struct MeshIssue {
    pub item: MeshItem,
    pub msg: String,
}

impl MeshIssue {
    fn new(item: MeshItem, msg: impl Into<String>) -> Self {
        MeshIssue {
            item,
            msg: msg.into(),
        }
    }
}

/// A conforming mesh of simple counterclockwise polygons with labelled boundary edges.
///
/// Immutable once built; every constructor checks the topological invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMesh {
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    boundary: Vec<BoundaryEdge>,
}

impl PolyMesh {
    pub fn new(vertices: Vec<Point>, cells: Vec<Vec<usize>>, boundary: Vec<BoundaryEdge>) -> Result<Self> {
        let mesh = PolyMesh {
            vertices,
            cells,
            boundary,
        };
        mesh.check().map_err(|issue| Error::InvalidMesh(issue.msg))?;
        Ok(mesh)
    }

    /// Builds the boundary records from the topology, labelling each edge with `label`.
    pub fn with_boundary_labels(
        vertices: Vec<Point>,
        cells: Vec<Vec<usize>>,
        label: impl Fn(Point, Point) -> String,
    ) -> Result<Self> {
        let boundary = topological_boundary(&cells)
            .into_iter()
            .map(|(a, b)| BoundaryEdge {
                a,
                b,
                label: label(vertices[a], vertices[b]),
            })
            .collect();
        Self::new(vertices, cells, boundary)
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point>, cells: Vec<Vec<usize>>, boundary: Vec<BoundaryEdge>) -> Self {
        PolyMesh {
            vertices,
            cells,
            boundary,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_coords(&self, cell: usize) -> Vec<Point> {
        self.cells[cell].iter().map(|&v| self.vertices[v]).collect()
    }

    /// Unique undirected edges as `(lo, hi)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = BTreeSet::new();
        for cell in &self.cells {
            for k in 0..cell.len() {
                let a = cell[k];
                let b = cell[(k + 1) % cell.len()];
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.into_iter().collect()
    }

    pub fn labels(&self) -> BTreeSet<&str> {
        self.boundary.iter().map(|e| e.label.as_str()).collect()
    }

    /// Sorted vertices touched by boundary edges carrying `label`.
    pub fn vertices_with_label(&self, label: &str) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .boundary
            .iter()
            .filter(|e| e.label == label)
            .flat_map(|e| [e.a, e.b])
            .collect();
        set.into_iter().collect()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.boundary.iter().flat_map(|e| [e.a, e.b]).collect();
        set.into_iter().collect()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.cells.len())
            .map(|c| polygon_area(&self.cell_coords(c)))
            .sum()
    }

    /// Closest vertex to `p` if it lies within `tol`.
    pub fn find_vertex(&self, p: Point, tol: f64) -> Option<usize> {
        let (idx, d) = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, ((v[0] - p[0]).powi(2) + (v[1] - p[1]).powi(2)).sqrt()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (d <= tol).then_some(idx)
    }

    /// Splits every cell into a fan of triangles from its first vertex.
    ///
    /// Only valid for convex cells; used to build simplicial reference meshes.
    pub fn triangulated(&self) -> Result<PolyMesh> {
        let mut cells = Vec::new();
        for cell in &self.cells {
            if cell.len() == 4 {
                // split along the shorter diagonal
                let p: Vec<Point> = cell.iter().map(|&v| self.vertices[v]).collect();
                let d02 = dist(p[0], p[2]);
                let d13 = dist(p[1], p[3]);
                if d02 <= d13 {
                    cells.push(vec![cell[0], cell[1], cell[2]]);
                    cells.push(vec![cell[0], cell[2], cell[3]]);
                } else {
                    cells.push(vec![cell[0], cell[1], cell[3]]);
                    cells.push(vec![cell[1], cell[2], cell[3]]);
                }
            } else {
                for k in 1..cell.len() - 1 {
                    cells.push(vec![cell[0], cell[k], cell[k + 1]]);
                }
            }
        }
        PolyMesh::new(self.vertices.clone(), cells, self.boundary.clone())
    }

    pub(crate) fn check(&self) -> std::result::Result<(), MeshIssue> {
        let nv = self.vertices.len();
        if self.cells.is_empty() {
            return Err(MeshIssue::new(MeshItem::Global, "mesh has no cells"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(MeshIssue::new(MeshItem::Vertex(i), format!("vertex {i} has non-finite coordinates")));
            }
        }
        let mut used = vec![false; nv];
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(MeshIssue::new(MeshItem::Cell(c), format!("cell {c} has fewer than 3 vertices")));
            }
            for &v in cell {
                if v >= nv {
                    return Err(MeshIssue::new(
                        MeshItem::Cell(c),
                        format!("cell {c} references vertex {v} beyond vertex count {nv}"),
                    ));
                }
                used[v] = true;
            }
            let distinct: BTreeSet<_> = cell.iter().collect();
            if distinct.len() != cell.len() {
                return Err(MeshIssue::new(MeshItem::Cell(c), format!("cell {c} repeats a vertex")));
            }
            let pts = self.cell_coords(c);
            let area = polygon_area(&pts);
            if area <= 0.0 || !area.is_finite() {
                return Err(MeshIssue::new(
                    MeshItem::Cell(c),
                    format!("cell {c} has non-positive signed area {area:e} (must be counterclockwise)"),
                ));
            }
            if let Some((e1, e2)) = self_intersection(&pts) {
                return Err(MeshIssue::new(
                    MeshItem::Cell(c),
                    format!("cell {c} is not simple: edges {e1} and {e2} intersect"),
                ));
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(MeshIssue::new(MeshItem::Vertex(v), format!("vertex {v} is not used by any cell")));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for k in 0..cell.len() {
                let e = (cell[k], cell[(k + 1) % cell.len()]);
                if let Some(prev) = directed.insert(e, c) {
                    return Err(MeshIssue::new(
                        MeshItem::Cell(c),
                        format!(
                            "edge ({}, {}) is traversed in the same direction by cells {prev} and {c}",
                            e.0, e.1
                        ),
                    ));
                }
            }
        }
        let topo: BTreeSet<(usize, usize)> = topological_boundary(&self.cells)
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let mut seen = BTreeSet::new();
        for (i, e) in self.boundary.iter().enumerate() {
            let key = (e.a.min(e.b), e.a.max(e.b));
            if e.a >= nv || e.b >= nv {
                return Err(MeshIssue::new(
                    MeshItem::Boundary(i),
                    format!("boundary edge ({}, {}) references a vertex beyond vertex count {nv}", e.a, e.b),
                ));
            }
            if e.label.is_empty() || e.label.chars().any(char::is_whitespace) {
                return Err(MeshIssue::new(MeshItem::Boundary(i), "boundary label must be a non-empty word"));
            }
            if !topo.contains(&key) {
                return Err(MeshIssue::new(
                    MeshItem::Boundary(i),
                    format!("boundary edge ({}, {}) is not on the mesh boundary", e.a, e.b),
                ));
            }
            if !seen.insert(key) {
                return Err(MeshIssue::new(
                    MeshItem::Boundary(i),
                    format!("boundary edge ({}, {}) listed twice", e.a, e.b),
                ));
            }
        }
        if let Some(missing) = topo.difference(&seen).next() {
            return Err(MeshIssue::new(
                MeshItem::Global,
                format!("open boundary: edge ({}, {}) has no boundary record", missing.0, missing.1),
            ));
        }
        Ok(())
    }
}

/// Directed edges used by exactly one cell whose reverse is unused, in cell order.
fn topological_boundary(cells: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut directed = BTreeSet::new();
    for cell in cells {
        for k in 0..cell.len() {
            directed.insert((cell[k], cell[(k + 1) % cell.len()]));
        }
    }
    let mut out = Vec::new();
    for cell in cells {
        for k in 0..cell.len() {
            let (a, b) = (cell[k], cell[(k + 1) % cell.len()]);
            if !directed.contains(&(b, a)) {
                out.push((a, b));
            }
        }
    }
    out
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

pub(crate) fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on_segment = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on_segment(q1, q2, p1, d1) || on_segment(q1, q2, p2, d2) || on_segment(p1, p2, q1, d3) || on_segment(p1, p2, q2, d4)
}

/// First pair of non-adjacent edges that touch, if any.
fn self_intersection(pts: &[Point]) -> Option<(usize, usize)> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Labels for meshes of the unit square: `bottom`, `right`, `top`, `left`.
pub fn unit_square_label(a: Point, b: Point) -> String {
    side_label(a, b, [0.0, 0.0], [1.0, 1.0])
}

pub(crate) fn side_label(a: Point, b: Point, lo: Point, hi: Point) -> String {
    let tol = 1e-9 * (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let near = |x: f64, t: f64| (x - t).abs() <= tol;
    if near(a[1], lo[1]) && near(b[1], lo[1]) {
        "bottom".into()
    } else if near(a[0], hi[0]) && near(b[0], hi[0]) {
        "right".into()
    } else if near(a[1], hi[1]) && near(b[1], hi[1]) {
        "top".into()
    } else if near(a[0], lo[0]) && near(b[0], lo[0]) {
        "left".into()
    } else {
        "boundary".into()
    }
}
