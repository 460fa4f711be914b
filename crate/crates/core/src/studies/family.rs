use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::{generate_structured, voronoi_mesh, PolyMesh, StructuredKind, VoronoiOptions};

/// Mesh family of the unit square indexed by one refinement parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFamily {
    /// `N x N` structured grid of the given kind.
    Structured(StructuredKind),
    /// Lloyd-relaxed Voronoi mesh with `N` cells.
    Voronoi,
}

impl FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "voronoi" => Ok(MeshFamily::Voronoi),
            other => other.parse().map(MeshFamily::Structured),
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MeshFamily::Structured(StructuredKind::Square) => "square",
            MeshFamily::Structured(StructuredKind::Trapezoid) => "trapezoid",
            MeshFamily::Structured(StructuredKind::HexStructured) => "hex_structured",
            MeshFamily::Structured(StructuredKind::Chevron) => "chevron",
            MeshFamily::Voronoi => "voronoi",
        };
        f.write_str(name)
    }
}

impl MeshFamily {
    /// Member `n` of the family; `seed` only matters for Voronoi meshes.
    pub fn build(self, n: usize, seed: u64) -> Result<PolyMesh> {
        match self {
            MeshFamily::Structured(kind) => generate_structured(kind, n),
            MeshFamily::Voronoi => voronoi_mesh(&VoronoiOptions {
                cells: n,
                seed,
                sweeps: VoronoiOptions::default().sweeps,
            }),
        }
    }
}

/// Checks a refinement list: non-empty and strictly increasing.
pub fn check_refinements(levels: &[usize]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidConfig("empty refinement list".into()));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(format!(
            "refinement list {levels:?} is not strictly increasing"
        )));
    }
    Ok(())
}
