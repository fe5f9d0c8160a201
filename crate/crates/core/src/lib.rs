//! Tensor robust PCA over the t-product algebra.
//!
//! Third-order tensors are multiplied with the t-product: circular
//! convolution along the third mode, which the DFT along that mode turns into
//! independent matrix products on the frontal slices. On top of that algebra
//! this crate provides the t-SVD, the tensor nuclear norm (TNN) and its dual
//! spectral norm, the TNN proximal operator (t-SVT), and an ADMM solver for
//!
//! ```text
//! min ‖L‖_* + λ‖E‖_1   subject to   X = L + E
//! ```
//!
//! which recovers a low-tubal-rank tensor and a sparse tensor from their sum.
//!
//! All Fourier-domain routines exploit conjugate symmetry of real data: only
//! slices `0..=n3/2` are transformed and decomposed, the remainder is
//! mirrored by conjugation. This is what keeps t-SVD factors real.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature distributes per-slice work over rayon;
//! outputs are identical with or without it.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod fft;
pub mod fourier;
pub mod norms;
pub mod prox;
pub mod reference;
pub mod solver;
pub mod synth;
pub mod tensor;
pub mod tsvd;

mod par;

pub use algebra::{ctranspose, identity_tensor, is_fdiagonal, is_orthogonal, tprod};
pub use error::{Error, Result};
pub use fourier::{dft3, idft3, FourierTensor3};
pub use norms::{check_subgradient, incoherence, spectral_norm, tnn, IncoherenceReport};
pub use prox::{soft_threshold, tsvt};
pub use solver::{default_lambda, solve, SolverConfig, TrpcaSolution};
pub use tensor::Tensor3;
pub use tsvd::{
    average_rank, best_rank_k, singular_values, skinny_tsvd, tsvd, tubal_rank, FactorKind,
    TSvdFactors, DEFAULT_RANK_TOL,
};

/// Complex scalar used for Fourier-domain data.
pub type C64 = nalgebra::Complex<f64>;
