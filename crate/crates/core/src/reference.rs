//! Dense reference operators.
//!
//! These materialize the block-circulant view of a tensor and are O(n3²) in
//! memory. Production paths never call them; they exist so tests can check
//! the Fourier-domain routines against the definitions.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier::FourierTensor3;
use crate::tensor::Tensor3;
use crate::C64;

/// `bcirc(A)`: the `(n1·n3) × (n2·n3)` block-circulant matrix whose block
/// `(p, q)` is frontal slice `(p − q) mod n3`.
pub fn bcirc(a: &Tensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = a.dims();
    let mut m = DMatrix::zeros(n1 * n3, n2 * n3);
    for p in 0..n3 {
        for q in 0..n3 {
            let k = (p + n3 - q) % n3;
            for i in 0..n1 {
                for j in 0..n2 {
                    m[(p * n1 + i, q * n2 + j)] = a.get(i, j, k);
                }
            }
        }
    }
    m
}

/// Frontal slices stacked vertically: `(n1·n3) × n2`.
pub fn unfold(a: &Tensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = a.dims();
    DMatrix::from_fn(n1 * n3, n2, |r, j| a.get(r % n1, j, r / n1))
}

/// Inverse of [`unfold`] for tubes of length `n3`.
pub fn fold(m: &DMatrix<f64>, n3: usize) -> Result<Tensor3> {
    let (rows, n2) = m.shape();
    if n3 == 0 || rows % n3 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "cannot fold {rows} rows into tubes of length {n3}"
        )));
    }
    let n1 = rows / n3;
    Ok(Tensor3::from_fn(n1, n2, n3, |i, j, k| m[(k * n1 + i, j)]))
}

/// `bdiag(Ā)`: the Fourier slices placed on the block diagonal.
pub fn bdiag(abar: &FourierTensor3) -> DMatrix<C64> {
    let (n1, n2, n3) = abar.dims();
    let mut m = DMatrix::zeros(n1 * n3, n2 * n3);
    for k in 0..n3 {
        for i in 0..n1 {
            for j in 0..n2 {
                m[(k * n1 + i, k * n2 + j)] = abar.get(i, j, k);
            }
        }
    }
    m
}

/// The `n × n` DFT matrix `F[j, k] = exp(−2πi·jk/n)`, built entry by entry.
pub fn dft_matrix(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |j, k| {
        let theta = -2.0 * core::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        C64::new(libm::cos(theta), libm::sin(theta))
    })
}

/// Kronecker product `F ⊗ I_m` for a square complex `F`.
pub fn kron_identity(f: &DMatrix<C64>, m: usize) -> DMatrix<C64> {
    let n = f.nrows();
    DMatrix::from_fn(n * m, f.ncols() * m, |r, c| {
        if r % m == c % m {
            f[(r / m, c / m)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// t-product by definition: `fold(bcirc(A)·unfold(B))`.
pub fn tprod_dense(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    if a.n2() != b.n1() || a.n3() != b.n3() {
        return Err(Error::ShapeMismatch(format!(
            "t-product of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    fold(&(bcirc(a) * unfold(b)), a.n3())
}

/// Singular values of `bcirc(A)`, descending.
pub fn bcirc_singular_values(a: &Tensor3) -> Vec<f64> {
    let sv = bcirc(a).singular_values();
    let mut out: Vec<f64> = sv.iter().copied().collect();
    out.sort_by(|x, y| y.total_cmp(x));
    out
}
