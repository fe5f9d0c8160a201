//! The t-product and its companions.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier::{from_half_spectrum, half_spectrum};
use crate::par::map_range;
use crate::tensor::Tensor3;

/// Default tolerance for the orthogonality and f-diagonality predicates.
pub const PREDICATE_TOL: f64 = 1e-8;

/// t-product `A ∗ B` of an `n1 × n2 × n3` and an `n2 × l × n3` tensor.
///
/// Computed as slice-wise matrix products in the Fourier domain over slices
/// `0..=n3/2`; the upper half of the spectrum follows by conjugation. With
/// `n3 = 1` this is a plain matrix product.
pub fn tprod(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    let (n1, n2, n3) = a.dims();
    let (m2, l, m3) = b.dims();
    if n2 != m2 || n3 != m3 {
        return Err(Error::ShapeMismatch(format!(
            "t-product of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    if n3 == 1 {
        let c = a.slice_matrix(0) * b.slice_matrix(0);
        return Ok(Tensor3::from_fn(n1, l, 1, |i, j, _| c[(i, j)]));
    }
    if n1 == 0 || l == 0 {
        return Ok(Tensor3::zeros(n1, l, n3));
    }
    if n2 == 0 {
        return Ok(Tensor3::zeros(n1, l, n3));
    }
    let abar = half_spectrum(a);
    let bbar = half_spectrum(b);
    let cbar: Vec<_> = map_range(abar.len(), |k| &abar[k] * &bbar[k]);
    let (c, _) = from_half_spectrum(&cbar, n3)?;
    Ok(c)
}

/// Conjugate transpose `A*`: transpose every frontal slice and reverse the
/// order of slices `1..n3` (0-based slice `k` of the result is the transpose
/// of input slice `(n3 − k) mod n3`).
pub fn ctranspose(a: &Tensor3) -> Tensor3 {
    let (n1, n2, n3) = a.dims();
    Tensor3::from_fn(n2, n1, n3, |i, j, k| a.get(j, i, (n3 - k) % n3))
}

/// `n × n × n3` identity: first frontal slice `I_n`, the rest zero.
pub fn identity_tensor(n: usize, n3: usize) -> Tensor3 {
    Tensor3::from_fn(n, n, n3, |i, j, k| if k == 0 && i == j { 1.0 } else { 0.0 })
}

/// `‖Q* ∗ Q − I_r‖_F` for an `n × r × n3` tensor: zero exactly when the
/// lateral slices of `Q` are orthonormal.
pub fn column_orthonormality_defect(q: &Tensor3) -> Result<f64> {
    let gram = tprod(&ctranspose(q), q)?;
    Ok((&gram - &identity_tensor(q.n2(), q.n3())).fro_norm())
}

/// Whether `Q* ∗ Q = Q ∗ Q* = I`, each deviation measured in Frobenius norm
/// against the absolute bound `tol`.
pub fn is_orthogonal(q: &Tensor3, tol: f64) -> Result<bool> {
    let (n1, n2, n3) = q.dims();
    if n1 != n2 {
        return Err(Error::ShapeMismatch(format!(
            "orthogonality needs square frontal slices, got {n1}x{n2}x{n3}"
        )));
    }
    let id = identity_tensor(n1, n3);
    let qt = ctranspose(q);
    let left = (&tprod(&qt, q)? - &id).fro_norm();
    let right = (&tprod(q, &qt)? - &id).fro_norm();
    Ok(left <= tol && right <= tol)
}

/// Whether every frontal slice is diagonal, up to `tol` in magnitude.
pub fn is_fdiagonal(s: &Tensor3, tol: f64) -> bool {
    let (n1, n2, n3) = s.dims();
    (0..n3).all(|k| {
        (0..n1).all(|i| (0..n2).all(|j| i == j || s.get(i, j, k).abs() <= tol))
    })
}

/// Matrix `A` seen as an `n1 × n2 × 1` tensor.
pub fn from_matrix(m: &DMatrix<f64>) -> Tensor3 {
    Tensor3::from_fn(m.nrows(), m.ncols(), 1, |i, j, _| m[(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n1: usize, n2: usize, n3: usize, salt: f64) -> Tensor3 {
        Tensor3::from_fn(n1, n2, n3, |i, j, k| {
            libm::cos((2 * i + 7 * j + 3 * k) as f64 * 0.41 + salt)
        })
    }

    #[test]
    fn ctranspose_reverses_trailing_slices() {
        let a = sample(2, 3, 4, 0.3);
        let at = ctranspose(&a);
        assert_eq!(at.dims(), (3, 2, 4));
        for (k, src) in [0usize, 3, 2, 1].iter().enumerate() {
            assert_eq!(at.slice_matrix(k), a.slice_matrix(*src).transpose());
        }
        assert_eq!(ctranspose(&at), a);
    }

    #[test]
    fn identity_is_neutral() {
        let a = sample(3, 3, 4, 1.1);
        let id = identity_tensor(3, 4);
        assert!(tprod(&a, &id).unwrap().max_abs_diff(&a) < 1e-13);
        assert!(tprod(&id, &a).unwrap().max_abs_diff(&a) < 1e-13);
        assert!((identity_tensor(5, 3).fro_norm() - libm::sqrt(5.0)).abs() < 1e-15);
    }

    #[test]
    fn n3_one_is_matrix_product() {
        let a = sample(2, 3, 1, 0.0);
        let b = sample(3, 4, 1, 0.5);
        let expected = a.slice_matrix(0) * b.slice_matrix(0);
        assert_eq!(tprod(&a, &b).unwrap().slice_matrix(0), expected);
    }

    #[test]
    fn shape_mismatch() {
        let a = sample(2, 3, 2, 0.0);
        let b = sample(2, 3, 2, 0.0);
        assert!(matches!(tprod(&a, &b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(is_orthogonal(&a, 1e-8), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn predicates_on_identity_and_dense() {
        let id = identity_tensor(4, 3);
        assert!(is_orthogonal(&id, 1e-12).unwrap());
        assert!(is_fdiagonal(&id, 1e-12));
        let dense = sample(3, 3, 3, 0.7);
        assert!(!is_fdiagonal(&dense, 1e-6));
        assert!(!is_orthogonal(&dense, 1e-6).unwrap());
    }
}
