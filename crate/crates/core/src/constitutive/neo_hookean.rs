use std::str::FromStr;

use super::ConstitutiveResponse;
use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Tensor4};

/// Which compressible neo-Hookean first Piola-Kirchhoff stress to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NeoHookeanVariant {
    /// `P = mu (F - F^-T) + lambda ln(J) F^-T`, stress free at `F = I`.
    #[default]
    Standard,
    /// `P = mu (F + F^-T) + lambda (J - 1) J F^-T`.
    AsPrinted,
    /// `P = mu (F - F^-T) + lambda (J - 1) J F^-T`, stress free at `F = I`.
    PrintedVolumetric,
}

impl FromStr for NeoHookeanVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(NeoHookeanVariant::Standard),
            "as_printed" => Ok(NeoHookeanVariant::AsPrinted),
            "printed_volumetric" => Ok(NeoHookeanVariant::PrintedVolumetric),
            other => Err(Error::InvalidParameter(format!("unknown neo-Hookean variant `{other}`"))),
        }
    }
}

/// First Piola-Kirchhoff stress and its full derivative with respect to `grad u`.
///
/// Both variants have the form `P = mu F + phi(J) F^-T`; the tangent is
/// `mu d_ik d_JL + J phi'(J) Finv_Ji Finv_Lk - phi(J) Finv_Jk Finv_Li`.
pub fn eval_neo_hookean(grad: &Tensor2, lambda: f64, mu: f64, variant: NeoHookeanVariant) -> Result<ConstitutiveResponse> {
    let f = Tensor2::IDENTITY + *grad;
    let j = f.det();
    if !(j > 0.0) {
        return Err(Error::InvertedElement { det: j });
    }
    let finv = f.inverse().ok_or(Error::InvertedElement { det: j })?;
    let finv_t = finv.transpose();
    let (phi, j_dphi) = match variant {
        NeoHookeanVariant::Standard => (lambda * j.ln() - mu, lambda),
        NeoHookeanVariant::AsPrinted => (mu + lambda * (j - 1.0) * j, lambda * (2.0 * j - 1.0) * j),
        NeoHookeanVariant::PrintedVolumetric => (lambda * (j - 1.0) * j - mu, lambda * (2.0 * j - 1.0) * j),
    };
    let stress = f * mu + finv_t * phi;
    let tangent = Tensor4::from_fn(|i, jj, k, l| {
        let d = if i == k && jj == l { mu } else { 0.0 };
        d + j_dphi * finv.0[jj][i] * finv.0[l][k] - phi * finv.0[jj][k] * finv.0[l][i]
    });
    Ok(ConstitutiveResponse::elastic(stress, tangent))
}
