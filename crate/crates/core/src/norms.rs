//! Tensor spectral and nuclear norms, incoherence diagnostics, and a
//! subgradient verifier for the nuclear norm.

use crate::algebra::{ctranspose, tprod};
use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use crate::tsvd::{fourier_svd, skinny_tsvd, DEFAULT_RANK_TOL};

/// `‖A‖ = ‖bcirc(A)‖`: the largest singular value over all Fourier slices.
pub fn spectral_norm(a: &Tensor3) -> Result<f64> {
    Ok(fourier_svd(a, false)?.max_sigma())
}

/// Tensor nuclear norm `Σ_i S(i, i, 1) = (1/n3)·‖bcirc(A)‖_*`.
pub fn tnn(a: &Tensor3) -> Result<f64> {
    Ok(fourier_svd(a, false)?.tensor_singular_values().iter().sum())
}

/// Smallest `μ` satisfying each of the three tensor incoherence bounds for
/// the skinny t-SVD `U ∗ S ∗ V*` of a tensor of tubal rank `r`:
///
/// * `max_i ‖U* ∗ e̊_i‖_F ≤ √(μr/(n1·n3))`
/// * `max_j ‖V* ∗ e̊_j‖_F ≤ √(μr/(n2·n3))`
/// * `‖U ∗ V*‖_∞ ≤ √(μr/(n1·n2·n3²))`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherenceReport {
    pub mu_u: f64,
    pub mu_v: f64,
    pub mu_joint: f64,
    pub r: usize,
}

/// `max_i ‖Q(i, :, :)‖_F²`. `Q* ∗ e̊_i` stacks the `i`-th horizontal slice of
/// `Q` with its tubes reversed, so the two norms agree.
fn max_row_energy(q: &Tensor3) -> f64 {
    let (n1, r, n3) = q.dims();
    (0..n1)
        .map(|i| {
            let mut acc = 0.0;
            for k in 0..n3 {
                for j in 0..r {
                    let v = q.get(i, j, k);
                    acc += v * v;
                }
            }
            acc
        })
        .fold(0.0, f64::max)
}

pub fn incoherence(a: &Tensor3, rank_tol: f64) -> Result<IncoherenceReport> {
    let (n1, n2, n3) = a.dims();
    let f = skinny_tsvd(a, rank_tol)?;
    let r = f.width();
    if r == 0 {
        return Err(Error::ZeroTensor);
    }
    let rf = r as f64;
    let (n1f, n2f, n3f) = (n1 as f64, n2 as f64, n3 as f64);
    let mu_u = n1f * n3f / rf * max_row_energy(&f.u);
    let mu_v = n2f * n3f / rf * max_row_energy(&f.v);
    let joint = tprod(&f.u, &ctranspose(&f.v))?.linf_norm();
    let mu_joint = n1f * n2f * n3f * n3f / rf * joint * joint;
    Ok(IncoherenceReport { mu_u, mu_v, mu_joint, r })
}

/// Whether `U ∗ V* + W` is a subgradient of the nuclear norm at `a`, i.e.
/// `‖U* ∗ W‖_F ≤ tol`, `‖W ∗ V‖_F ≤ tol` and `‖W‖ ≤ 1 + tol`, with
/// `U, V` the skinny t-SVD factors of `a`.
pub fn check_subgradient(a: &Tensor3, w: &Tensor3, tol: f64) -> Result<bool> {
    a.ensure_same_shape(w, "subgradient check")?;
    if spectral_norm(w)? > 1.0 + tol {
        return Ok(false);
    }
    let f = skinny_tsvd(a, DEFAULT_RANK_TOL)?;
    if f.width() == 0 {
        return Ok(true);
    }
    let left = tprod(&ctranspose(&f.u), w)?.fro_norm();
    let right = tprod(w, &f.v)?.fro_norm();
    Ok(left <= tol && right <= tol)
}
