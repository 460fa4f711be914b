//! Pointwise constitutive algorithms.
//!
//! Every law maps a displacement gradient (and, for plasticity, the history of the
//! point) to a stress and its consistent tangent with respect to the gradient. The
//! element kernels call a law exactly once per element and never look inside it.

mod elastic;
mod j2;
mod neo_hookean;

pub use elastic::{eval_benchmark, eval_hencky_von_mises, eval_linear_elastic, HenckyParams, BENCHMARK_MODULUS};
pub use j2::{j2_return_map, yield_function, J2Params};
pub use neo_hookean::{eval_neo_hookean, NeoHookeanVariant};

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Tensor4};

/// History variables of one element for J2 plasticity (plane strain).
///
/// Symmetric tensors are stored as `[xx, yy, xy, zz]` (tensor shear, not engineering).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MaterialState {
    pub plastic_strain: [f64; 4],
    pub back_stress: [f64; 4],
    /// Accumulated plastic multiplier.
    pub gamma: f64,
}

impl MaterialState {
    pub fn plastic_strain_trace(&self) -> f64 {
        self.plastic_strain[0] + self.plastic_strain[1] + self.plastic_strain[3]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstitutiveResponse {
    pub stress: Tensor2,
    pub tangent: Tensor4,
    pub new_state: Option<MaterialState>,
    /// Out-of-plane stress under plane strain.
    pub stress_zz: Option<f64>,
}

impl ConstitutiveResponse {
    pub(crate) fn elastic(stress: Tensor2, tangent: Tensor4) -> Self {
        ConstitutiveResponse {
            stress,
            tangent,
            new_state: None,
            stress_zz: None,
        }
    }
}

/// The constitutive laws available to the solver.
#[derive(Clone, Debug, PartialEq)]
pub enum Law {
    LinearElastic { lambda: f64, mu: f64 },
    HenckyVonMises(HenckyParams),
    /// `sigma = 3 (1 + |eps|^2) 1e4 eps`
    Benchmark,
    NeoHookean { lambda: f64, mu: f64, variant: NeoHookeanVariant },
    J2(J2Params),
}

impl Law {
    pub fn is_inelastic(&self) -> bool {
        matches!(self, Law::J2(_))
    }

    /// Whether the tangent has major symmetry at every state.
    ///
    /// The Hencky-von Mises law derives from a potential only when `lambda' = -mu'`.
    pub fn has_symmetric_tangent(&self) -> bool {
        match self {
            Law::HenckyVonMises(p) => p.lambda_d == -1.0,
            _ => true,
        }
    }

    /// History at the undeformed, virgin configuration.
    pub fn initial_state(&self) -> Option<MaterialState> {
        self.is_inelastic().then(MaterialState::default)
    }

    /// Evaluates the law. Elastic laws ignore `grad_old` and `state`; J2 requires `state`.
    pub fn evaluate(&self, grad_old: &Tensor2, state: Option<&MaterialState>, grad: &Tensor2) -> Result<ConstitutiveResponse> {
        if !grad.is_finite() {
            return Err(Error::InvalidInput("non-finite displacement gradient".into()));
        }
        match self {
            Law::LinearElastic { lambda, mu } => Ok(eval_linear_elastic(grad, *lambda, *mu)),
            Law::HenckyVonMises(p) => Ok(eval_hencky_von_mises(grad, p)),
            Law::Benchmark => Ok(eval_benchmark(grad)),
            Law::NeoHookean { lambda, mu, variant } => eval_neo_hookean(grad, *lambda, *mu, *variant),
            Law::J2(p) => {
                let state = state.ok_or_else(|| Error::InvalidState("J2 plasticity needs a history state".into()))?;
                j2_return_map(grad_old, state, grad, p)
            }
        }
    }

    /// Tangent used to scale the stabilization at a converged configuration.
    ///
    /// For J2 a point on the yield surface (up to roundoff) is treated as elastic, so
    /// the result does not flip with the sign of the residual yield function.
    pub fn reference_tangent(&self, state: Option<&MaterialState>, grad: &Tensor2) -> Result<Tensor4> {
        if let Law::J2(p) = self {
            let state = state.ok_or_else(|| Error::InvalidState("J2 plasticity needs a history state".into()))?;
            if !grad.is_finite() {
                return Err(Error::InvalidInput("non-finite displacement gradient".into()));
            }
            if yield_function(state, grad, p) <= YIELD_TOLERANCE * p.yield_radius(state.gamma) {
                return Ok(p.elastic_tangent());
            }
        }
        Ok(self.evaluate(grad, state, grad)?.tangent)
    }

    /// Elastic-only convenience wrapper.
    pub fn evaluate_elastic(&self, grad: &Tensor2) -> Result<ConstitutiveResponse> {
        let state = self.initial_state();
        self.evaluate(&Tensor2::ZERO, state.as_ref(), grad)
    }
}

/// Central finite-difference approximation of `d stress / d grad` at `grad`.
///
/// Each component is perturbed by `step * (1 + max|grad|)`.
pub fn tangent_fd_oracle(law: &Law, state: Option<&MaterialState>, grad: &Tensor2, step: f64) -> Result<Tensor4> {
    let h = step * (1.0 + grad.max_abs());
    let stress = |g: &Tensor2| law.evaluate(&Tensor2::ZERO, state, g).map(|r| r.stress);
    let mut t = Tensor4::ZERO;
    for k in 0..2 {
        for l in 0..2 {
            let mut plus = *grad;
            plus.0[k][l] += h;
            let mut minus = *grad;
            minus.0[k][l] -= h;
            let d = (stress(&plus)? - stress(&minus)?) * (0.5 / h);
            for i in 0..2 {
                for j in 0..2 {
                    t.0[i][j][k][l] = d.0[i][j];
                }
            }
        }
    }
    Ok(t)
}

pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Relative slack on the yield function below which a point counts as elastic.
pub const YIELD_TOLERANCE: f64 = 1e-8;
