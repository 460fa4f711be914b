use super::geometry::{area_centroid, polygon_area, ElementGeometry};
use super::{cross, dist, Point, PolyMesh};

/// Relative margin (times `h_E`) by which the centroid must clear every edge line.
const STAR_MARGIN: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ElementQuality {
    /// Shortest edge over the element diameter.
    pub min_edge_ratio: f64,
    /// Star-shaped with respect to the vertex centroid.
    pub star_shaped: bool,
    /// Radius of a disc inside the kernel, over the diameter. Zero when the kernel is empty.
    pub kernel_radius_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshQualityReport {
    pub elements: Vec<ElementQuality>,
}

impl MeshQualityReport {
    pub fn all_star_shaped(&self) -> bool {
        self.elements.iter().all(|e| e.star_shaped)
    }

    pub fn min_edge_ratio(&self) -> f64 {
        self.elements.iter().map(|e| e.min_edge_ratio).fold(f64::INFINITY, f64::min)
    }

    pub fn min_kernel_radius_ratio(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| e.kernel_radius_ratio)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Whether every edge's inward half-plane contains the vertex centroid with margin.
pub(crate) fn star_shaped_wrt_centroid(geom: &ElementGeometry) -> bool {
    let n = geom.coords.len();
    let c = geom.centroid;
    (0..n).all(|k| {
        let a = geom.coords[k];
        let b = geom.coords[(k + 1) % n];
        cross(a, b, c) / dist(a, b) > STAR_MARGIN * geom.diameter
    })
}

/// Intersection of the inward half-planes of all edges (the kernel of the polygon).
fn kernel(pts: &[Point]) -> Vec<Point> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let mut poly = vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
    let n = pts.len();
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let m = poly.len();
        let mut out = Vec::with_capacity(m + 1);
        for i in 0..m {
            let p = poly[i];
            let q = poly[(i + 1) % m];
            let sp = cross(a, b, p);
            let sq = cross(a, b, q);
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        poly = out;
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

fn kernel_radius(pts: &[Point]) -> f64 {
    let k = kernel(pts);
    if k.len() < 3 || polygon_area(&k) <= 0.0 {
        return 0.0;
    }
    // distance from the kernel centroid to the nearest edge line of the polygon
    let c = area_centroid(&k);
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            cross(a, b, c) / dist(a, b)
        })
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

/// Reports shape-regularity indicators per element; never rejects a mesh.
pub fn validate(mesh: &PolyMesh) -> MeshQualityReport {
    let elements = (0..mesh.num_cells())
        .map(|c| match ElementGeometry::from_polygon(mesh.cell_coords(c), c) {
            Ok(g) => {
                let min_edge = g.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
                ElementQuality {
                    min_edge_ratio: min_edge / g.diameter,
                    star_shaped: star_shaped_wrt_centroid(&g),
                    kernel_radius_ratio: kernel_radius(&g.coords) / g.diameter,
                }
            }
            Err(_) => ElementQuality {
                min_edge_ratio: 0.0,
                star_shaped: false,
                kernel_radius_ratio: 0.0,
            },
        })
        .collect();
    MeshQualityReport { elements }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, StructuredKind};

    #[test]
    fn square_grid() {
        let r = validate(&generate_structured(StructuredKind::Square, 4).unwrap());
        assert!(r.all_star_shaped());
        for e in &r.elements {
            assert!((e.min_edge_ratio - 0.5f64.sqrt()).abs() < 1e-12);
            assert!((e.kernel_radius_ratio - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn l_cell_with_centroid_outside_kernel() {
        // thin L: kernel is the small corner square [0,0.2]^2, vertex centroid is (0.6, 0.6)
        let l = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 0.2], [0.2, 0.2], [0.2, 2.0], [0.0, 2.0]];
        let mesh = PolyMesh::with_boundary_labels(l.clone(), vec![(0..6).collect()], |_, _| "g".into()).unwrap();
        let r = validate(&mesh);
        assert!(!r.elements[0].star_shaped);
        assert!(r.elements[0].kernel_radius_ratio > 0.0);
        let k = kernel(&l);
        assert!((polygon_area(&k) - 0.04).abs() < 1e-14);
    }

    #[test]
    fn hex_and_chevron_are_star_shaped() {
        for kind in [StructuredKind::HexStructured, StructuredKind::Chevron] {
            let r = validate(&generate_structured(kind, 8).unwrap());
            assert!(r.all_star_shaped(), "{kind:?}");
            assert!(r.min_edge_ratio() > 0.1, "{kind:?}");
        }
    }
}
