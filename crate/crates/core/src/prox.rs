//! Proximal operators of the tensor nuclear norm and the ℓ1 norm.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fourier::{from_half_spectrum, half_spectrum, is_self_conjugate};
use crate::par::map_range;
use crate::tensor::Tensor3;
use crate::tsvd::slice_svd;

/// Tensor singular value thresholding `D_τ(Y)`, the minimizer of
/// `τ‖X‖_* + ½‖X − Y‖_F²`.
///
/// The shrinkage `(σ̄ − τ)_+` acts on the singular values of the Fourier
/// slices, not on the tensor singular values of `Y`.
pub fn tsvt(y: &Tensor3, tau: f64) -> Result<Tensor3> {
    Ok(tsvt_with_residual(y, tau)?.0)
}

/// [`tsvt`] plus the relative imaginary residual of the inverse transform.
pub fn tsvt_with_residual(y: &Tensor3, tau: f64) -> Result<(Tensor3, f64)> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument("threshold must be finite and nonnegative"));
    }
    let n3 = y.n3();
    let half = half_spectrum(y);
    let shrunk = map_range(half.len(), |k| {
        let svd = slice_svd(&half[k], is_self_conjugate(k, n3), true, k)?;
        let kept: Vec<f64> = svd
            .sigma
            .iter()
            .map(|s| s - tau)
            .take_while(|&s| s > 0.0)
            .collect();
        Ok(svd.recompose_with(&kept))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    from_half_spectrum(&shrunk, n3)
}

/// Elementwise `sign(x)·max(|x| − κ, 0)`, the minimizer of
/// `κ‖E‖_1 + ½‖E − X‖_F²`.
pub fn soft_threshold(x: &Tensor3, kappa: f64) -> Tensor3 {
    x.map(|v| {
        if v > kappa {
            v - kappa
        } else if v < -kappa {
            v + kappa
        } else {
            0.0
        }
    })
}
