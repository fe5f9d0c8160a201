//! Dense real third-order tensors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real `n1 × n2 × n3` tensor.
///
/// Storage is frontal-slice-slowest and row-major within a slice: entry
/// `(i, j, k)` lives at `(k·n1 + i)·n2 + j`, so every frontal slice is a
/// contiguous row-major `n1 × n2` block and a tube `(i, j, :)` is strided by
/// `n1·n2`.
///
/// Dimensions are normally positive; a zero `n2` appears only for the empty
/// factors of a rank-zero skinny t-SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    /// Wraps `data` (canonical layout). Fails on a length mismatch or a
    /// non-finite entry.
    pub fn new(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Result<Self> {
        let len = n1
            .checked_mul(n2)
            .and_then(|v| v.checked_mul(n3))
            .ok_or_else(|| Error::ShapeMismatch(format!("{n1}x{n2}x{n3} overflows usize")))?;
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{n1}x{n2}x{n3} tensor needs {len} values, got {}",
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n1, n2, n3, data })
    }

    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        Self { n1, n2, n3, data: vec![0.0; n1 * n2 * n3] }
    }

    /// Builds a tensor from `f(i, j, k)`.
    pub fn from_fn(n1: usize, n2: usize, n3: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { n1, n2, n3, data }
    }

    /// Stacks equally sized frontal slices.
    pub fn from_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or(Error::InvalidArgument("at least one frontal slice is required"))?;
        let (n1, n2) = first.shape();
        let mut data = Vec::with_capacity(n1 * n2 * slices.len());
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (n1, n2) {
                return Err(Error::ShapeMismatch(format!(
                    "slice {k} is {:?}, expected {:?}",
                    s.shape(),
                    (n1, n2)
                )));
            }
            for i in 0..n1 {
                for j in 0..n2 {
                    data.push(s[(i, j)]);
                }
            }
        }
        Self::new(n1, n2, slices.len(), data)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn n3(&self) -> usize {
        self.n3
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        (k * self.n1 + i) * self.n2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.data[idx] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Frontal slice `k` as a contiguous row-major block.
    pub fn slice(&self, k: usize) -> &[f64] {
        let len = self.n1 * self.n2;
        &self.data[k * len..(k + 1) * len]
    }

    pub fn slice_matrix(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n1, self.n2, self.slice(k))
    }

    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.n3).map(|k| self.get(i, j, k)).collect()
    }

    /// Lateral slices `cols` (second-mode indices) as a new tensor.
    pub fn lateral_range(&self, cols: core::ops::Range<usize>) -> Tensor3 {
        assert!(cols.end <= self.n2, "lateral range out of bounds");
        let width = cols.end - cols.start;
        Tensor3::from_fn(self.n1, width, self.n3, |i, j, k| self.get(i, cols.start + j, k))
    }

    pub fn same_shape(&self, other: &Tensor3) -> bool {
        self.dims() == other.dims()
    }

    pub(crate) fn ensure_same_shape(&self, other: &Tensor3, op: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{op}: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )))
        }
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Tensor3 {
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise `f(self, other)`; panics on a shape mismatch.
    pub fn zip_map(&self, other: &Tensor3, mut f: impl FnMut(f64, f64) -> f64) -> Tensor3 {
        assert_eq!(self.dims(), other.dims(), "elementwise op on mismatched shapes");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, alpha: f64) -> Tensor3 {
        self.map(|v| alpha * v)
    }

    /// `⟨A, B⟩ = Σ a_ijk·b_ijk`.
    pub fn inner(&self, other: &Tensor3) -> Result<f64> {
        self.ensure_same_shape(other, "inner product")?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Number of entries that are not exactly zero.
    pub fn l0_norm(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    /// `‖self − other‖_∞`; panics on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "difference of mismatched shapes");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `‖self − other‖_F / ‖other‖_F`, or the absolute error when `other` is zero.
    pub fn rel_error(&self, reference: &Tensor3) -> f64 {
        let diff = (self - reference).fro_norm();
        let base = reference.fro_norm();
        if base == 0.0 {
            diff
        } else {
            diff / base
        }
    }
}

impl Add for &Tensor3 {
    type Output = Tensor3;

    fn add(self, rhs: &Tensor3) -> Tensor3 {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        self.zip_map(rhs, |a, b| a - b)
    }
}
