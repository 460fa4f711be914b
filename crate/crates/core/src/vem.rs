//! Element kernels of the lowest-order virtual element space.
//!
//! Element degrees of freedom are interleaved per vertex, `[ux0, uy0, ux1, uy1, ...]`,
//! following the counterclockwise vertex loop of the cell.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::constitutive::{Law, MaterialState};
use crate::error::{Error, Result};
use crate::mesh::quality::star_shaped_wrt_centroid;
use crate::mesh::ElementGeometry;
use crate::tensor::{Tensor2, Tensor4};

/// How a fourth-order tangent is reduced to the scalar stabilization scale.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AlphaNorm {
    #[default]
    MaxEntry,
    Frobenius,
}

impl AlphaNorm {
    pub fn apply(&self, t: &Tensor4) -> f64 {
        match self {
            AlphaNorm::MaxEntry => t.max_abs(),
            AlphaNorm::Frobenius => t.frobenius(),
        }
    }
}

impl FromStr for AlphaNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "max_entry" => Ok(AlphaNorm::MaxEntry),
            "frobenius" => Ok(AlphaNorm::Frobenius),
            other => Err(Error::InvalidParameter(format!("unknown alpha norm `{other}`"))),
        }
    }
}

/// Per-vertex vectors `q` with `(Pi0 grad v)_ij = sum_v v_i(v) q_v,j`.
fn gradient_weights(geom: &ElementGeometry) -> Vec<[f64; 2]> {
    let n = geom.num_vertices();
    let scale = 0.5 / geom.area;
    (0..n)
        .map(|k| {
            let next = geom.coords[(k + 1) % n];
            let prev = geom.coords[(k + n - 1) % n];
            [scale * (next[1] - prev[1]), -scale * (next[0] - prev[0])]
        })
        .collect()
}

fn vertex_mean(geom: &ElementGeometry) -> [f64; 2] {
    geom.centroid
}

fn check_len(geom: &ElementGeometry, v: &[f64]) {
    assert_eq!(v.len(), 2 * geom.num_vertices(), "element dofs do not match the vertex count");
}

/// Average of the gradient over the element, computed from boundary values.
pub fn pi0_grad(geom: &ElementGeometry, v: &[f64]) -> Tensor2 {
    check_len(geom, v);
    let mut g = Tensor2::ZERO;
    for (k, q) in gradient_weights(geom).iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                g.0[i][j] += v[2 * k + i] * q[j];
            }
        }
    }
    g
}

/// Vertex values of the linear polynomial with gradient `pi0_grad(v)` and the vertex
/// average of `v`.
pub fn pi_nabla(geom: &ElementGeometry, v: &[f64]) -> Vec<f64> {
    let g = pi0_grad(geom, v);
    let n = geom.num_vertices();
    let mut mean = [0.0; 2];
    for k in 0..n {
        mean[0] += v[2 * k] / n as f64;
        mean[1] += v[2 * k + 1] / n as f64;
    }
    let c = vertex_mean(geom);
    let mut out = vec![0.0; 2 * n];
    for (k, x) in geom.coords.iter().enumerate() {
        let d = [x[0] - c[0], x[1] - c[1]];
        for i in 0..2 {
            out[2 * k + i] = mean[i] + g.0[i][0] * d[0] + g.0[i][1] * d[1];
        }
    }
    out
}

/// Matrix of `Pi0 grad` acting on element dofs; row `2i + j` gives component `(i, j)`.
pub fn gradient_matrix(geom: &ElementGeometry) -> DMatrix<f64> {
    let n = geom.num_vertices();
    let mut b = DMatrix::zeros(4, 2 * n);
    for (k, q) in gradient_weights(geom).iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                b[(2 * i + j, 2 * k + i)] = q[j];
            }
        }
    }
    b
}

/// Matrix of `Pi_nabla` acting on element dofs.
pub fn projector_matrix(geom: &ElementGeometry) -> DMatrix<f64> {
    let n = geom.num_vertices();
    let q = gradient_weights(geom);
    let c = vertex_mean(geom);
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for (m, x) in geom.coords.iter().enumerate() {
        let d = [x[0] - c[0], x[1] - c[1]];
        for (k, qk) in q.iter().enumerate() {
            let w = 1.0 / n as f64 + qk[0] * d[0] + qk[1] * d[1];
            for i in 0..2 {
                p[(2 * m + i, 2 * k + i)] = w;
            }
        }
    }
    p
}

/// Stabilization `(I - P)^T (I - P)` on element dofs.
pub fn stab_matrix(geom: &ElementGeometry) -> DMatrix<f64> {
    let p = projector_matrix(geom);
    let n = p.nrows();
    let r = DMatrix::identity(n, n) - p;
    r.transpose() * r
}

/// Vertex quadrature weights exact for linear functions.
pub fn vertex_load_weights(geom: &ElementGeometry) -> Result<Vec<f64>> {
    if !star_shaped_wrt_centroid(geom) {
        return Err(Error::UnsupportedElement {
            cell: geom.cell,
            msg: "element is not star-shaped with respect to its vertex centroid".into(),
        });
    }
    let n = geom.num_vertices();
    let c = vertex_mean(geom);
    let mut w = vec![0.0; n];
    let mut shared = 0.0;
    for k in 0..n {
        let a = geom.coords[k];
        let b = geom.coords[(k + 1) % n];
        let area = 0.5 * ((a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]));
        w[k] += area / 3.0;
        w[(k + 1) % n] += area / 3.0;
        shared += area / (3.0 * n as f64);
    }
    for wk in &mut w {
        *wk += shared;
    }
    Ok(w)
}

/// Stabilization scale from a law's tangent at `Pi0 grad s`.
pub fn alpha_param(law: &Law, state: Option<&MaterialState>, geom: &ElementGeometry, s: &[f64], norm: AlphaNorm) -> Result<f64> {
    let grad = pi0_grad(geom, s);
    alpha_at_gradient(law, state, &grad, norm)
}

pub fn alpha_at_gradient(law: &Law, state: Option<&MaterialState>, grad: &Tensor2, norm: AlphaNorm) -> Result<f64> {
    let t = law.reference_tangent(state, grad)?;
    let alpha = norm.apply(&t);
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidState(format!("stabilization scale {alpha} is not positive")));
    }
    Ok(alpha)
}

/// Everything about one element that does not depend on the displacement.
#[derive(Clone, Debug)]
pub struct ProjectorPack {
    pub area: f64,
    /// 4 x 2n matrix of `Pi0 grad`.
    pub g: DMatrix<f64>,
    pub p_nabla: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub load_weights: Vec<f64>,
}

impl ProjectorPack {
    pub fn new(geom: &ElementGeometry) -> Result<Self> {
        Ok(ProjectorPack {
            area: geom.area,
            g: gradient_matrix(geom),
            p_nabla: projector_matrix(geom),
            s: stab_matrix(geom),
            load_weights: vertex_load_weights(geom)?,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.g.ncols()
    }

    pub fn grad(&self, v: &[f64]) -> Tensor2 {
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.g.row(r).iter().zip(v).map(|(a, b)| a * b).sum();
        }
        Tensor2::from_flat(out)
    }
}

/// Local quantities produced by one constitutive call.
#[derive(Clone, Debug)]
pub struct ElementResponse {
    pub force: DVector<f64>,
    pub tangent: Option<DMatrix<f64>>,
    pub stress: Tensor2,
    pub stress_zz: Option<f64>,
    pub new_state: Option<MaterialState>,
}

/// Residual (and optionally tangent) of the element with a given stabilization scale.
///
/// The law is evaluated exactly once, at `Pi0 grad u`.
pub fn element_response(
    law: &Law,
    pack: &ProjectorPack,
    u: &[f64],
    alpha: f64,
    state: Option<&MaterialState>,
    u_old: Option<&[f64]>,
    with_tangent: bool,
) -> Result<ElementResponse> {
    let grad = pack.grad(u);
    let grad_old = u_old.map(|v| pack.grad(v)).unwrap_or(Tensor2::ZERO);
    let r = law.evaluate(&grad_old, state, &grad)?;

    let uv = DVector::from_column_slice(u);
    let sigma = DVector::from_column_slice(&r.stress.to_flat());
    let force = pack.g.tr_mul(&sigma) * pack.area + &pack.s * uv * alpha;
    let tangent = with_tangent.then(|| {
        let m = r.tangent.to_matrix();
        let c = DMatrix::from_fn(4, 4, |i, j| m[i][j]);
        pack.g.tr_mul(&(c * &pack.g)) * pack.area + &pack.s * alpha
    });
    Ok(ElementResponse {
        force,
        tangent,
        stress: r.stress,
        stress_zz: r.stress_zz,
        new_state: r.new_state,
    })
}

/// Generalized internal forces with the stabilization scaled at `s`.
pub fn local_residual(
    law: &Law,
    geom: &ElementGeometry,
    u: &[f64],
    s: &[f64],
    state: Option<&MaterialState>,
    u_old: Option<&[f64]>,
) -> Result<(DVector<f64>, Option<MaterialState>)> {
    check_len(geom, u);
    let pack = ProjectorPack::new(geom)?;
    let alpha = alpha_param(law, state, geom, s, AlphaNorm::MaxEntry)?;
    let r = element_response(law, &pack, u, alpha, state, u_old, false)?;
    Ok((r.force, r.new_state))
}

/// Tangent of [`local_residual`] in `u`, with the stabilization scale frozen at `s`.
pub fn local_tangent(
    law: &Law,
    geom: &ElementGeometry,
    u: &[f64],
    s: &[f64],
    state: Option<&MaterialState>,
    u_old: Option<&[f64]>,
) -> Result<DMatrix<f64>> {
    check_len(geom, u);
    let pack = ProjectorPack::new(geom)?;
    let alpha = alpha_param(law, state, geom, s, AlphaNorm::MaxEntry)?;
    let r = element_response(law, &pack, u, alpha, state, u_old, true)?;
    Ok(r.tangent.expect("tangent requested"))
}
