//! Quarter of a plate strip with a central circular hole.
//!
//! Origin at the hole centre; the quarter occupies `[0, width] x [0, height]` minus the
//! disc of radius `hole_radius`. Boundary labels: `sym_x` on `x = 0`, `sym_y` on `y = 0`,
//! `top`, `right` and `hole`.

use std::f64::consts::FRAC_PI_2;

use super::{Point, PolyMesh};
use crate::error::{Error, Result};

/// Radial grading exponent of the layers around the hole.
const RADIAL_GRADING: f64 = 1.2;

#[derive(Clone, Debug, PartialEq)]
pub struct StripGeometry {
    pub width: f64,
    pub height: f64,
    pub hole_radius: f64,
}

impl Default for StripGeometry {
    fn default() -> Self {
        StripGeometry {
            width: 100.0,
            height: 180.0,
            hole_radius: 50.0,
        }
    }
}

impl StripGeometry {
    /// Top of the hole on the symmetry axis.
    pub fn point_a(&self) -> Point {
        [0.0, self.hole_radius]
    }

    /// Side of the hole on the ligament.
    pub fn point_b(&self) -> Point {
        [self.hole_radius, 0.0]
    }

    pub fn area(&self) -> f64 {
        self.width * self.height - 0.25 * std::f64::consts::PI * self.hole_radius.powi(2)
    }

    fn label(&self, a: Point, b: Point) -> String {
        let tol = 1e-9 * self.height;
        let both = |f: &dyn Fn(Point) -> bool| f(a) && f(b);
        if both(&|p| p[1].abs() <= tol) {
            "sym_y".into()
        } else if both(&|p| p[0].abs() <= tol) {
            "sym_x".into()
        } else if both(&|p| (p[1] - self.height).abs() <= tol) {
            "top".into()
        } else if both(&|p| (p[0] - self.width).abs() <= tol) {
            "right".into()
        } else {
            "hole".into()
        }
    }
}

/// Structured quadrilateral mesh with `arc_segments` edges along the quarter hole.
///
/// With `triangulate` every quadrilateral is split along its shorter diagonal.
pub fn quarter_strip_mesh(geom: &StripGeometry, arc_segments: usize, triangulate: bool) -> Result<PolyMesh> {
    let n = arc_segments;
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "arc segments must be even and at least 4 (got {n})"
        )));
    }
    let (w, h, r) = (geom.width, geom.height, geom.hole_radius);
    if !(r > 0.0 && r < w && w < h) {
        return Err(Error::InvalidParameter(
            "strip geometry needs 0 < hole radius < width < height".into(),
        ));
    }
    let m = n / 2;
    let mut vertices: Vec<Point> = Vec::new();

    // ring around the hole: transfinite blend between the arc and the outer corner path
    for j in 0..=m {
        let s = (j as f64 / m as f64).powf(RADIAL_GRADING);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let theta = t * FRAC_PI_2;
            let inner = [r * theta.cos(), r * theta.sin()];
            let outer = if 2 * i <= n {
                [w, 2.0 * w * t]
            } else {
                [w - 2.0 * w * (t - 0.5), w]
            };
            vertices.push([
                (1.0 - s) * inner[0] + s * outer[0],
                (1.0 - s) * inner[1] + s * outer[1],
            ]);
        }
    }
    let ring = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::new();
    for j in 0..m {
        for i in 0..n {
            cells.push(vec![ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j)]);
        }
    }

    // rectangle above the ring, matching the ring's top edge
    let cols = n / 2;
    let spacing = w / cols as f64;
    let rows = ((h - w) / spacing).ceil().max(1.0) as usize;
    let dy = (h - w) / rows as f64;
    let base = vertices.len();
    for k in 1..=rows {
        for c in 0..=cols {
            vertices.push([c as f64 * spacing, w + k as f64 * dy]);
        }
    }
    let rect = |c: usize, k: usize| {
        if k == 0 {
            ring(n - c, m)
        } else {
            base + (k - 1) * (cols + 1) + c
        }
    };
    for k in 0..rows {
        for c in 0..cols {
            cells.push(vec![rect(c, k), rect(c + 1, k), rect(c + 1, k + 1), rect(c, k + 1)]);
        }
    }
    // exact corner coordinates on the shared line
    for c in 0..=cols {
        vertices[rect(c, 0)] = [c as f64 * spacing, w];
    }

    let mesh = PolyMesh::with_boundary_labels(vertices, cells, |a, b| geom.label(a, b))?;
    if triangulate {
        mesh.triangulated()
    } else {
        Ok(mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_converges_to_exact() {
        let g = StripGeometry::default();
        let coarse = quarter_strip_mesh(&g, 32, false).unwrap();
        let fine = quarter_strip_mesh(&g, 64, false).unwrap();
        let e1 = (coarse.total_area() - g.area()).abs();
        let e2 = (fine.total_area() - g.area()).abs();
        assert!(e1 < 0.01 * g.area());
        assert!(e2 < e1 / 3.0, "{e1} {e2}");
    }

    #[test]
    fn labels_and_points() {
        let g = StripGeometry::default();
        let m = quarter_strip_mesh(&g, 32, false).unwrap();
        let labels: Vec<_> = m.labels().into_iter().collect();
        assert_eq!(labels, vec!["hole", "right", "sym_x", "sym_y", "top"]);
        assert!(m.find_vertex(g.point_a(), 1e-9).is_some());
        assert!(m.find_vertex(g.point_b(), 1e-9).is_some());
        let t = quarter_strip_mesh(&g, 32, true).unwrap();
        assert_eq!(t.num_cells(), 2 * m.num_cells());
        assert_eq!(t.num_vertices(), m.num_vertices());
    }

    #[test]
    fn rejects_odd_segments() {
        assert!(quarter_strip_mesh(&StripGeometry::default(), 7, false).is_err());
    }
}
