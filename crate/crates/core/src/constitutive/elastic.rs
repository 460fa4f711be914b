use super::ConstitutiveResponse;
use crate::tensor::{Tensor2, Tensor4};

/// Modulus scale of the benchmark law, MPa.
pub const BENCHMARK_MODULUS: f64 = 3.0e4;

pub fn eval_linear_elastic(grad: &Tensor2, lambda: f64, mu: f64) -> ConstitutiveResponse {
    let eps = grad.sym();
    let stress = Tensor2::IDENTITY * (lambda * eps.trace()) + eps * (2.0 * mu);
    let tangent = Tensor4::outer(&Tensor2::IDENTITY, &Tensor2::IDENTITY) * lambda + Tensor4::sym_identity() * (2.0 * mu);
    ConstitutiveResponse::elastic(stress, tangent)
}

/// Lamé functions of the Hencky-von Mises law, in terms of `rho = |dev eps|`:
///
/// `mu(rho) = mu_a + mu_b / sqrt(1 + rho^2)` and `lambda(rho) = lambda_c + lambda_d * mu(rho)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HenckyParams {
    pub mu_a: f64,
    pub mu_b: f64,
    pub lambda_c: f64,
    pub lambda_d: f64,
}

impl Default for HenckyParams {
    /// Carreau-type shear modulus `3/4 (1 + (1 + rho^2)^(-1/2)) 1e4` with
    /// `lambda = 3/4 (1 - 2 mu / 1e4) 1e4`.
    fn default() -> Self {
        HenckyParams {
            mu_a: 0.75e4,
            mu_b: 0.75e4,
            lambda_c: 0.75e4,
            lambda_d: -1.5,
        }
    }
}

impl HenckyParams {
    pub fn mu(&self, rho: f64) -> f64 {
        self.mu_a + self.mu_b / (1.0 + rho * rho).sqrt()
    }

    pub fn lambda(&self, rho: f64) -> f64 {
        self.lambda_c + self.lambda_d * self.mu(rho)
    }

    /// `mu'(rho) / rho`, smooth through `rho = 0`.
    fn mu_slope_over_rho(&self, rho: f64) -> f64 {
        -self.mu_b * (1.0 + rho * rho).powf(-1.5)
    }
}

pub fn eval_hencky_von_mises(grad: &Tensor2, params: &HenckyParams) -> ConstitutiveResponse {
    let eps = grad.sym();
    let tr = eps.trace();
    let dev = eps.dev();
    let rho = dev.norm();
    let mu = params.mu(rho);
    let lambda = params.lambda(rho);
    let stress = Tensor2::IDENTITY * (lambda * tr) + eps * (2.0 * mu);

    let g_mu = params.mu_slope_over_rho(rho);
    let g_lambda = params.lambda_d * g_mu;
    // d rho / d eps = dev / rho; the 1/rho is absorbed in the slopes
    let chain = Tensor2::IDENTITY * (g_lambda * tr) + eps * (2.0 * g_mu);
    let tangent = Tensor4::outer(&Tensor2::IDENTITY, &Tensor2::IDENTITY) * lambda
        + Tensor4::sym_identity() * (2.0 * mu)
        + Tensor4::outer(&chain, &dev);
    ConstitutiveResponse::elastic(stress, tangent)
}

pub fn eval_benchmark(grad: &Tensor2) -> ConstitutiveResponse {
    let eps = grad.sym();
    let n2 = eps.ddot(&eps);
    let modulus = BENCHMARK_MODULUS * (1.0 + n2);
    let stress = eps * modulus;
    let tangent = Tensor4::sym_identity() * modulus + Tensor4::outer(&eps, &eps) * (2.0 * BENCHMARK_MODULUS);
    ConstitutiveResponse::elastic(stress, tangent)
}
