//! Low-order virtual element solver for nonlinear elastic and elastoplastic solids on
//! general polygonal meshes.

pub mod analysis;
pub mod constitutive;
pub mod error;
pub mod mesh;
pub mod solver;
pub mod studies;
pub mod tensor;
pub mod vem;

pub use error::{Error, Result};
pub use mesh::{ElementGeometry, PolyMesh};
pub use tensor::{Tensor2, Tensor4};
