#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use trpca_core::reference::{dft_matrix, kron_identity};
use trpca_core::synth::stream_rng;
use trpca_core::{Tensor3, C64};

pub fn rand_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
    let mut rng = stream_rng(seed, 7);
    Tensor3::from_fn(n1, n2, n3, |_, _, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
    a.rel_error(b)
}

/// Fourier slices computed with an explicit DFT matrix, independent of the FFT.
pub fn dense_fourier_slices(a: &Tensor3) -> Vec<DMatrix<C64>> {
    let (n1, n2, n3) = a.dims();
    let f = dft_matrix(n3);
    (0..n3)
        .map(|j| {
            DMatrix::from_fn(n1, n2, |r, c| {
                (0..n3).fold(C64::new(0.0, 0.0), |acc, k| acc + f[(j, k)] * a.get(r, c, k))
            })
        })
        .collect()
}

/// (F ⊗ I_{n1}) · bcirc(A) · (F⁻¹ ⊗ I_{n2}).
pub fn block_diagonalized(a: &Tensor3) -> DMatrix<C64> {
    let (n1, n2, n3) = a.dims();
    let f = dft_matrix(n3);
    let finv = f.adjoint().unscale(n3 as f64);
    let b = trpca_core::reference::bcirc(a).map(|v| C64::new(v, 0.0));
    kron_identity(&f, n1) * b * kron_identity(&finv, n2)
}

pub fn complex_rel(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let base = b.norm();
    let d = (a - b).norm();
    if base == 0.0 { d } else { d / base }
}
