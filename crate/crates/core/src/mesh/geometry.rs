use super::{dist, Point, PolyMesh};
use crate::error::{Error, Result};

/// Signed shoelace area; positive for counterclockwise loops.
pub fn polygon_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

/// Area-weighted centroid of a counterclockwise polygon.
pub(crate) fn area_centroid(pts: &[Point]) -> Point {
    let n = pts.len();
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for k in 0..n {
        let p = pts[k];
        let q = pts[(k + 1) % n];
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    a *= 0.5;
    [cx / (6.0 * a), cy / (6.0 * a)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeGeometry {
    /// Local indices of the endpoints in the cell loop.
    pub start: usize,
    pub end: usize,
    pub length: f64,
    /// Outward unit normal.
    pub normal: [f64; 2],
}

/// Geometric data of one polygon needed by the projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementGeometry {
    /// Cell id, used in error messages.
    pub cell: usize,
    pub coords: Vec<Point>,
    pub area: f64,
    pub diameter: f64,
    /// Arithmetic mean of the vertices.
    pub centroid: Point,
    pub edges: Vec<EdgeGeometry>,
}

impl ElementGeometry {
    /// Geometry of a counterclockwise vertex loop.
    pub fn from_polygon(coords: Vec<Point>, cell: usize) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::DegenerateElement {
                cell,
                msg: "fewer than 3 vertices".into(),
            });
        }
        let area = polygon_area(&coords);
        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                diameter = diameter.max(dist(coords[i], coords[j]));
            }
        }
        if !(area > 1e-14 * diameter * diameter) {
            return Err(Error::DegenerateElement {
                cell,
                msg: format!("area {area:e} is not positive"),
            });
        }
        let inv_n = 1.0 / n as f64;
        let centroid = coords
            .iter()
            .fold([0.0, 0.0], |c, p| [c[0] + p[0] * inv_n, c[1] + p[1] * inv_n]);
        let edges = (0..n)
            .map(|k| {
                let a = coords[k];
                let b = coords[(k + 1) % n];
                let length = dist(a, b);
                EdgeGeometry {
                    start: k,
                    end: (k + 1) % n,
                    length,
                    normal: [(b[1] - a[1]) / length, -(b[0] - a[0]) / length],
                }
            })
            .collect();
        Ok(ElementGeometry {
            cell,
            coords,
            area,
            diameter,
            centroid,
            edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    /// Sum of `h_f n_f` over the edges; vanishes for a closed loop.
    pub fn normal_sum(&self) -> [f64; 2] {
        self.edges.iter().fold([0.0, 0.0], |s, e| {
            [s[0] + e.length * e.normal[0], s[1] + e.length * e.normal[1]]
        })
    }
}

pub fn element_geometry(mesh: &PolyMesh, cell: usize) -> Result<ElementGeometry> {
    if cell >= mesh.num_cells() {
        return Err(Error::InvalidParameter(format!(
            "cell index {cell} out of range ({} cells)",
            mesh.num_cells()
        )));
    }
    ElementGeometry::from_polygon(mesh.cell_coords(cell), cell)
}
