//! Line-based mesh exchange format.
//!
//! ```text
//! polymesh 2d
//! v x y            # one per vertex
//! c i1 i2 ... ik   # one per cell, 0-based, counterclockwise
//! b i j label      # one per boundary edge
//! ```
//!
//! Tokens are whitespace-delimited and `#` starts a comment.

use std::fmt::Write as _;

use super::{BoundaryEdge, MeshItem, Point, PolyMesh};
use crate::error::{Error, Result};

const HEADER: &str = "polymesh 2d";

pub fn serialize_mesh(mesh: &PolyMesh) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for v in mesh.vertices() {
        // `{:?}` prints the shortest representation that round-trips
        let _ = writeln!(out, "v {:?} {:?}", v[0], v[1]);
    }
    for cell in mesh.cells() {
        out.push('c');
        for i in cell {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    for e in mesh.boundary_edges() {
        let _ = writeln!(out, "b {} {} {}", e.a, e.b, e.label);
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a vertex index, found `{tok}`")))
}

pub fn load_mesh(text: &str) -> Result<PolyMesh> {
    let mut vertices: Vec<Point> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut boundary: Vec<BoundaryEdge> = Vec::new();
    let mut vertex_lines = Vec::new();
    let mut cell_lines = Vec::new();
    let mut boundary_lines = Vec::new();
    let mut saw_header = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if !saw_header {
            if toks != ["polymesh", "2d"] {
                return Err(parse_err(line, format!("expected header `{HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        match toks[0] {
            "v" => {
                if toks.len() != 3 {
                    return Err(parse_err(line, "vertex record needs exactly 2 coordinates"));
                }
                let mut p = [0.0; 2];
                for (k, t) in toks[1..].iter().enumerate() {
                    p[k] = t
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| parse_err(line, format!("invalid coordinate `{t}`")))?;
                }
                vertices.push(p);
                vertex_lines.push(line);
            }
            "c" => {
                if toks.len() < 4 {
                    return Err(parse_err(line, "cell record needs at least 3 vertex indices"));
                }
                let cell = toks[1..]
                    .iter()
                    .map(|t| parse_index(t, line))
                    .collect::<Result<Vec<_>>>()?;
                cells.push(cell);
                cell_lines.push(line);
            }
            "b" => {
                if toks.len() != 4 {
                    return Err(parse_err(line, "boundary record is `b i j label`"));
                }
                boundary.push(BoundaryEdge {
                    a: parse_index(toks[1], line)?,
                    b: parse_index(toks[2], line)?,
                    label: toks[3].to_string(),
                });
                boundary_lines.push(line);
            }
            other => return Err(parse_err(line, format!("unknown record type `{other}`"))),
        }
    }
    if !saw_header {
        return Err(parse_err(last_line.max(1), format!("missing header `{HEADER}`")));
    }

    let mesh = PolyMesh::new_unchecked(vertices, cells, boundary);
    if let Err(issue) = mesh.check() {
        let line = match issue.item {
            MeshItem::Vertex(i) => vertex_lines.get(i).copied().unwrap_or(last_line),
            MeshItem::Cell(i) => cell_lines.get(i).copied().unwrap_or(last_line),
            MeshItem::Boundary(i) => boundary_lines.get(i).copied().unwrap_or(last_line),
            MeshItem::Global => last_line,
        };
        return Err(parse_err(line, issue.msg));
    }
    Ok(mesh)
}
