//! Plane-strain J2 plasticity with linear isotropic and kinematic hardening.

use super::{ConstitutiveResponse, MaterialState};
use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Tensor4};

const SQRT_2_3: f64 = 0.816_496_580_927_726;

#[derive(Clone, Debug, PartialEq)]
pub struct J2Params {
    pub young: f64,
    pub poisson: f64,
    pub sigma_y0: f64,
    pub h_iso: f64,
    pub h_kin: f64,
}

impl Default for J2Params {
    fn default() -> Self {
        J2Params {
            young: 70.0,
            poisson: 0.2,
            sigma_y0: 0.8,
            h_iso: 10.0,
            h_kin: 10.0,
        }
    }
}

impl J2Params {
    pub fn mu(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    pub fn lambda(&self) -> f64 {
        self.young * self.poisson / ((1.0 + self.poisson) * (1.0 - 2.0 * self.poisson))
    }

    pub fn bulk(&self) -> f64 {
        self.lambda() + 2.0 * self.mu() / 3.0
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.young, self.sigma_y0].iter().all(|v| v.is_finite() && *v > 0.0)
            && self.poisson > -1.0
            && self.poisson < 0.5
            && self.h_iso >= 0.0
            && self.h_kin >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid J2 parameters {self:?}")))
        }
    }

    /// Radius of the yield surface in deviatoric stress space.
    pub fn yield_radius(&self, gamma: f64) -> f64 {
        SQRT_2_3 * (self.sigma_y0 + self.h_iso * SQRT_2_3 * gamma)
    }

    /// In-plane block of the isotropic elasticity tensor.
    pub fn elastic_tangent(&self) -> Tensor4 {
        Tensor4::outer(&Tensor2::IDENTITY, &Tensor2::IDENTITY) * self.lambda() + Tensor4::sym_identity() * (2.0 * self.mu())
    }
}

/// Symmetric 3x3 tensor with only in-plane and zz components, `[xx, yy, xy, zz]`.
type Sym = [f64; 4];

fn sym_norm(a: &Sym) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + 2.0 * a[2] * a[2] + a[3] * a[3]).sqrt()
}

fn sym_dev(a: &Sym) -> Sym {
    let m = (a[0] + a[1] + a[3]) / 3.0;
    [a[0] - m, a[1] - m, a[2], a[3] - m]
}

fn sym_axpy(y: &mut Sym, alpha: f64, x: &Sym) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

struct Trial {
    stress: Sym,
    xi: Sym,
    xi_norm: f64,
    f: f64,
}

fn trial(state: &MaterialState, grad: &Tensor2, params: &J2Params) -> Trial {
    let eps = grad.sym();
    let p = &state.plastic_strain;
    let ee: Sym = [eps.0[0][0] - p[0], eps.0[1][1] - p[1], eps.0[0][1] - p[2], -p[3]];
    let (lambda, mu) = (params.lambda(), params.mu());
    let tr = ee[0] + ee[1] + ee[3];
    let stress = [
        lambda * tr + 2.0 * mu * ee[0],
        lambda * tr + 2.0 * mu * ee[1],
        2.0 * mu * ee[2],
        lambda * tr + 2.0 * mu * ee[3],
    ];
    let mut xi = sym_dev(&stress);
    sym_axpy(&mut xi, -1.0, &state.back_stress);
    let xi_norm = sym_norm(&xi);
    let f = xi_norm - params.yield_radius(state.gamma);
    Trial { stress, xi, xi_norm, f }
}

/// Trial yield function value at `grad` for the given history.
pub fn yield_function(state: &MaterialState, grad: &Tensor2, params: &J2Params) -> f64 {
    trial(state, grad, params).f
}

fn in_plane(a: &Sym) -> Tensor2 {
    Tensor2::new(a[0], a[2], a[2], a[1])
}

/// Radial return from the elastic predictor on `sym(grad_new) - plastic_strain`.
///
/// `grad_old` is unused: the update depends only on the stored history.
pub fn j2_return_map(
    _grad_old: &Tensor2,
    state: &MaterialState,
    grad_new: &Tensor2,
    params: &J2Params,
) -> Result<ConstitutiveResponse> {
    if !grad_new.is_finite() {
        return Err(Error::InvalidInput("non-finite displacement gradient".into()));
    }
    let tr = trial(state, grad_new, params);
    if !(tr.f > 0.0) {
        return Ok(ConstitutiveResponse {
            stress: in_plane(&tr.stress),
            tangent: params.elastic_tangent(),
            new_state: Some(state.clone()),
            stress_zz: Some(tr.stress[3]),
        });
    }

    let (mu, kappa) = (params.mu(), params.bulk());
    let hsum = params.h_iso + params.h_kin;
    let dgamma = tr.f / (2.0 * mu + 2.0 * hsum / 3.0);
    let n: Sym = tr.xi.map(|v| v / tr.xi_norm);

    let mut stress = tr.stress;
    sym_axpy(&mut stress, -2.0 * mu * dgamma, &n);
    let mut new_state = state.clone();
    sym_axpy(&mut new_state.plastic_strain, dgamma, &n);
    sym_axpy(&mut new_state.back_stress, 2.0 * params.h_kin * dgamma / 3.0, &n);
    new_state.gamma += dgamma;

    let theta = 1.0 - 2.0 * mu * dgamma / tr.xi_norm;
    let theta_bar = 1.0 / (1.0 + hsum / (3.0 * mu)) - (1.0 - theta);
    let n2 = in_plane(&n);
    let ii = Tensor4::outer(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
    let tangent = ii * kappa + (Tensor4::sym_identity() - ii * (1.0 / 3.0)) * (2.0 * mu * theta)
        - Tensor4::outer(&n2, &n2) * (2.0 * mu * theta_bar);

    Ok(ConstitutiveResponse {
        stress: in_plane(&stress),
        tangent,
        new_state: Some(new_state),
        stress_zz: Some(stress[3]),
    })
}
