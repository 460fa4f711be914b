//! Clipped Voronoi tessellations of a convex domain and Lloyd relaxation.

use std::collections::HashMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{area_centroid, polygon_area};
use super::{dist, unit_square_label, Point, PolyMesh};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiOptions {
    pub cells: usize,
    pub seed: u64,
    pub sweeps: usize,
}

impl Default for VoronoiOptions {
    fn default() -> Self {
        VoronoiOptions {
            cells: 100,
            seed: 0,
            sweeps: 10,
        }
    }
}

/// Keeps the part of a convex polygon where `(x - origin) . normal <= 0`.
fn clip_halfplane(poly: &[Point], origin: Point, normal: [f64; 2]) -> Vec<Point> {
    let side = |p: Point| (p[0] - origin[0]) * normal[0] + (p[1] - origin[1]) * normal[1];
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let sp = side(p);
        let sq = side(q);
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Voronoi cell of every seed intersected with the convex counterclockwise `domain`.
pub fn clipped_voronoi(seeds: &[Point], domain: &[Point]) -> Vec<Vec<Point>> {
    seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut order: Vec<(f64, usize)> = seeds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &t)| (dist(s, t), j))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut poly = domain.to_vec();
            for (d, j) in order {
                let reach = poly.iter().map(|&p| dist(s, p)).fold(0.0, f64::max);
                if d > 2.0 * reach {
                    break;
                }
                let t = seeds[j];
                let mid = [0.5 * (s[0] + t[0]), 0.5 * (s[1] + t[1])];
                poly = clip_halfplane(&poly, mid, [t[0] - s[0], t[1] - s[1]]);
                if poly.is_empty() {
                    break;
                }
            }
            poly
        })
        .collect()
}

/// Moves each seed to the area centroid of its clipped Voronoi cell, `sweeps` times.
pub fn lloyd_relax(seeds: &mut [Point], domain: &[Point], sweeps: usize) {
    for _ in 0..sweeps {
        let cells = clipped_voronoi(seeds, domain);
        for (s, cell) in seeds.iter_mut().zip(&cells) {
            if cell.len() >= 3 && polygon_area(cell) > 0.0 {
                *s = area_centroid(cell);
            }
        }
    }
}

/// Merges coincident polygon corners (within `tol`) into a conforming mesh.
pub fn polygons_to_mesh(polys: &[Vec<Point>], tol: f64, label: impl Fn(Point, Point) -> String) -> Result<PolyMesh> {
    let mut vertices: Vec<Point> = Vec::new();
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Point| ((p[0] / tol).floor() as i64, (p[1] / tol).floor() as i64);
    let mut cells = Vec::with_capacity(polys.len());
    for poly in polys {
        let mut cell: Vec<usize> = Vec::with_capacity(poly.len());
        for &p in poly {
            let (kx, ky) = key(p);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(ids) = grid.get(&(kx + dx, ky + dy)) {
                        for &id in ids {
                            if dist(vertices[id], p) <= tol {
                                found = Some(id);
                                break 'search;
                            }
                        }
                    }
                }
            }
            let id = found.unwrap_or_else(|| {
                vertices.push(p);
                grid.entry((kx, ky)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
            if cell.last() != Some(&id) {
                cell.push(id);
            }
        }
        while cell.len() > 1 && cell.first() == cell.last() {
            cell.pop();
        }
        if cell.len() >= 3 {
            cells.push(cell);
        }
    }
    PolyMesh::with_boundary_labels(vertices, cells, label)
}

/// Lloyd-relaxed random Voronoi mesh of the unit square.
pub fn voronoi_mesh(opts: &VoronoiOptions) -> Result<PolyMesh> {
    if opts.cells < 2 {
        return Err(Error::InvalidParameter("a Voronoi mesh needs at least 2 cells".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seeds: Vec<Point> = (0..opts.cells)
        .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let domain = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    lloyd_relax(&mut seeds, &domain, opts.sweeps);
    let polys = clipped_voronoi(&seeds, &domain);
    polygons_to_mesh(&polys, 1e-9, unit_square_label)
}
