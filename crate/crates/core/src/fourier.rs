//! Mode-3 DFT of tensors and the half-spectrum machinery built on it.
//!
//! For a real tensor the transformed slices obey `Ā⁽ʲ⁾ = conj(Ā⁽ⁿ³⁻ʲ⁾)` for
//! 0-based `j` in `1..n3`, with slice 0 (and slice `n3/2` for even `n3`)
//! real. Every per-slice algorithm in this crate therefore works on slices
//! `0..=n3/2` only and rebuilds the rest by conjugation.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::par::map_range;
use crate::tensor::Tensor3;
use crate::C64;

/// Imaginary residual (relative) tolerated and discarded when returning to
/// the real domain. Anything larger signals an invalid Fourier tensor.
pub const REALNESS_TOL: f64 = 1e-8;

/// Complex `n1 × n2 × n3` tensor in the same layout as [`Tensor3`], normally
/// holding `fft(A, [], 3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<C64>,
}

impl FourierTensor3 {
    pub fn new(n1: usize, n2: usize, n3: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n1 * n2 * n3 {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{n1}x{n2}x{n3} Fourier tensor needs {} values, got {}",
                n1 * n2 * n3,
                data.len()
            )));
        }
        Ok(Self { n1, n2, n3, data })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(k * self.n1 + i) * self.n2 + j]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: C64) {
        self.data[(k * self.n1 + i) * self.n2 + j] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn slice_matrix(&self, k: usize) -> DMatrix<C64> {
        let len = self.n1 * self.n2;
        DMatrix::from_row_slice(self.n1, self.n2, &self.data[k * len..(k + 1) * len])
    }

    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v.norm_sqr()).sum())
    }

    /// Real inner product `Re Σ conj(a)·b`.
    pub fn inner(&self, other: &FourierTensor3) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "inner product: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Largest deviation from conjugate symmetry, relative to `‖data‖_F`:
    /// imaginary parts of slice 0 and mismatches `Ā⁽ʲ⁾ − conj(Ā⁽ⁿ³⁻ʲ⁾)`.
    pub fn symmetry_defect(&self) -> f64 {
        let norm = self.fro_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                worst = worst.max(self.get(i, j, 0).im.abs());
                for k in 1..self.n3 {
                    let d = self.get(i, j, k) - self.get(i, j, self.n3 - k).conj();
                    worst = worst.max(libm::sqrt(d.norm_sqr()));
                }
            }
        }
        worst / norm
    }
}

/// Runs `f` over every tube of an `n1 × n2` grid, row by row, and returns the
/// per-row outputs in order.
fn per_row<T: Send>(n1: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    map_range(n1, f)
}

/// `fft(a, [], 3)`: unnormalized DFT of every tube.
pub fn dft3(a: &Tensor3) -> FourierTensor3 {
    let (n1, n2, n3) = a.dims();
    let plan = FftPlan::new(n3);
    let rows = per_row(n1, |i| {
        let mut buf = vec![C64::new(0.0, 0.0); n3];
        let mut scratch = Vec::new();
        let mut out = Vec::with_capacity(n2 * n3);
        for j in 0..n2 {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = C64::new(a.get(i, j, k), 0.0);
            }
            plan.forward_with_scratch(&mut buf, &mut scratch);
            out.extend_from_slice(&buf);
        }
        out
    });
    let mut data = vec![C64::new(0.0, 0.0); n1 * n2 * n3];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n2 {
            for k in 0..n3 {
                data[(k * n1 + i) * n2 + j] = row[j * n3 + k];
            }
        }
    }
    FourierTensor3 { n1, n2, n3, data }
}

/// Inverse mode-3 DFT keeping the real part, together with the discarded
/// imaginary energy relative to the full complex result.
pub fn idft3_with_residual(abar: &FourierTensor3) -> (Tensor3, f64) {
    let (n1, n2, n3) = abar.dims();
    let plan = FftPlan::new(n3);
    let rows = per_row(n1, |i| {
        let mut buf = vec![C64::new(0.0, 0.0); n3];
        let mut scratch = Vec::new();
        let mut out = Vec::with_capacity(n2 * n3);
        let (mut re2, mut im2) = (0.0, 0.0);
        for j in 0..n2 {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = abar.get(i, j, k);
            }
            plan.inverse_with_scratch(&mut buf, &mut scratch);
            for v in &buf {
                re2 += v.re * v.re;
                im2 += v.im * v.im;
                out.push(v.re);
            }
        }
        (out, re2, im2)
    });
    assemble(n1, n2, n3, rows)
}

fn assemble(n1: usize, n2: usize, n3: usize, rows: Vec<(Vec<f64>, f64, f64)>) -> (Tensor3, f64) {
    let mut t = Tensor3::zeros(n1, n2, n3);
    let (mut re2, mut im2) = (0.0, 0.0);
    for (i, (row, r, m)) in rows.into_iter().enumerate() {
        re2 += r;
        im2 += m;
        for j in 0..n2 {
            for k in 0..n3 {
                t.set(i, j, k, row[j * n3 + k]);
            }
        }
    }
    let total = re2 + im2;
    let residual = if total == 0.0 { 0.0 } else { libm::sqrt(im2 / total) };
    (t, residual)
}

/// `ifft(abar, [], 3)`. Fails with [`Error::SymmetryViolation`] when the
/// imaginary part of the result exceeds [`REALNESS_TOL`] relative.
pub fn idft3(abar: &FourierTensor3) -> Result<Tensor3> {
    let (t, residual) = idft3_with_residual(abar);
    if residual > REALNESS_TOL {
        return Err(Error::SymmetryViolation { residual });
    }
    Ok(t)
}

/// Number of independent Fourier slices of a real tensor: `⌊n3/2⌋ + 1`.
pub fn half_len(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Whether slice `k` is its own conjugate partner (slice 0, and `n3/2` for even `n3`).
pub fn is_self_conjugate(k: usize, n3: usize) -> bool {
    k == 0 || 2 * k == n3
}

/// Multiplicity of half-spectrum slice `k` in the full spectrum.
pub fn slice_weight(k: usize, n3: usize) -> usize {
    if is_self_conjugate(k, n3) {
        1
    } else {
        2
    }
}

/// Fourier slices `0..=n3/2` of a real tensor as complex matrices.
pub fn half_spectrum(a: &Tensor3) -> Vec<DMatrix<C64>> {
    let (n1, n2, n3) = a.dims();
    let h = half_len(n3);
    if n3 == 1 {
        return vec![a.slice_matrix(0).map(|v| C64::new(v, 0.0))];
    }
    let plan = FftPlan::new(n3);
    let rows = per_row(n1, |i| {
        let mut buf = vec![C64::new(0.0, 0.0); n3];
        let mut scratch = Vec::new();
        let mut out = Vec::with_capacity(n2 * h);
        for j in 0..n2 {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = C64::new(a.get(i, j, k), 0.0);
            }
            plan.forward_with_scratch(&mut buf, &mut scratch);
            out.extend_from_slice(&buf[..h]);
        }
        out
    });
    let mut slices = vec![DMatrix::<C64>::zeros(n1, n2); h];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n2 {
            for (k, s) in slices.iter_mut().enumerate() {
                let v = row[j * h + k];
                s[(i, j)] = if is_self_conjugate(k, n3) { C64::new(v.re, 0.0) } else { v };
            }
        }
    }
    slices
}

/// Rebuilds a real tensor from its half spectrum. Self-conjugate slices must
/// be real up to [`REALNESS_TOL`] (relative to the half spectrum's norm);
/// their imaginary parts are dropped. Returns the tensor and the relative
/// imaginary residual of the inverse transform before truncation.
pub fn from_half_spectrum(
    slices: &[DMatrix<C64>],
    n3: usize,
) -> Result<(Tensor3, f64)> {
    let h = half_len(n3);
    if slices.len() != h {
        return Err(Error::ShapeMismatch(alloc::format!(
            "half spectrum of length-{n3} tubes needs {h} slices, got {}",
            slices.len()
        )));
    }
    let (n1, n2) = slices[0].shape();

    let total: f64 = slices.iter().map(|s| s.iter().map(|v| v.norm_sqr()).sum::<f64>()).sum();
    let forced: f64 = slices
        .iter()
        .enumerate()
        .filter(|(k, _)| is_self_conjugate(*k, n3))
        .map(|(_, s)| s.iter().map(|v| v.im * v.im).sum::<f64>())
        .sum();
    if total > 0.0 {
        let residual = libm::sqrt(forced / total);
        if residual > REALNESS_TOL {
            return Err(Error::SymmetryViolation { residual });
        }
    }

    if n3 == 1 {
        let t = Tensor3::from_fn(n1, n2, 1, |i, j, _| slices[0][(i, j)].re);
        return Ok((t, 0.0));
    }

    let plan = FftPlan::new(n3);
    let rows = per_row(n1, |i| {
        let mut buf = vec![C64::new(0.0, 0.0); n3];
        let mut scratch = Vec::new();
        let mut out = Vec::with_capacity(n2 * n3);
        let (mut re2, mut im2) = (0.0, 0.0);
        for j in 0..n2 {
            for k in 0..h {
                let v = slices[k][(i, j)];
                buf[k] = if is_self_conjugate(k, n3) { C64::new(v.re, 0.0) } else { v };
            }
            for k in h..n3 {
                buf[k] = buf[n3 - k].conj();
            }
            plan.inverse_with_scratch(&mut buf, &mut scratch);
            for v in &buf {
                re2 += v.re * v.re;
                im2 += v.im * v.im;
                out.push(v.re);
            }
        }
        (out, re2, im2)
    });
    Ok(assemble(n1, n2, n3, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n1: usize, n2: usize, n3: usize) -> Tensor3 {
        Tensor3::from_fn(n1, n2, n3, |i, j, k| {
            libm::sin((3 * i + 5 * j + 7 * k) as f64 * 0.37 + 0.1) + 0.05 * (i * j) as f64
        })
    }

    #[test]
    fn n3_one_is_identity() {
        let a = sample(3, 2, 1);
        let abar = dft3(&a);
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(abar.get(i, j, 0), C64::new(a.get(i, j, 0), 0.0));
            }
        }
    }

    #[test]
    fn known_tube() {
        let a = Tensor3::new(1, 1, 4, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let abar = dft3(&a);
        let expected = [(10.0, 0.0), (-2.0, 2.0), (-2.0, 0.0), (-2.0, -2.0)];
        for (k, (re, im)) in expected.iter().enumerate() {
            assert!((abar.get(0, 0, k) - C64::new(*re, *im)).norm() < 1e-14);
        }
        let back = idft3(&abar).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn zero_maps_to_zero() {
        let abar = dft3(&Tensor3::zeros(2, 3, 5));
        assert!(abar.as_slice().iter().all(|v| *v == C64::new(0.0, 0.0)));
    }

    #[test]
    fn conjugate_symmetry_even_and_odd() {
        for n3 in [2, 5, 6, 7] {
            let abar = dft3(&sample(3, 4, n3));
            assert!(abar.symmetry_defect() <= 1e-10, "n3 = {n3}");
        }
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let a = sample(2, 2, 4);
        let mut abar = dft3(&a);
        let v = abar.get(0, 1, 1);
        abar.set(0, 1, 1, v + C64::new(0.0, 5.0));
        assert!(matches!(idft3(&abar), Err(Error::SymmetryViolation { .. })));
    }

    #[test]
    fn half_spectrum_roundtrip() {
        for n3 in [1, 2, 3, 4, 9, 10] {
            let a = sample(3, 2, n3);
            let half = half_spectrum(&a);
            assert_eq!(half.len(), half_len(n3));
            let (back, residual) = from_half_spectrum(&half, n3).unwrap();
            assert!(back.rel_error(&a) <= 1e-14, "n3 = {n3}");
            assert!(residual <= 1e-14);
        }
    }

    #[test]
    fn complex_self_conjugate_slice_is_rejected() {
        let a = sample(2, 2, 4);
        let mut half = half_spectrum(&a);
        half[2][(0, 0)] += C64::new(0.0, 10.0);
        assert!(matches!(
            from_half_spectrum(&half, 4),
            Err(Error::SymmetryViolation { .. })
        ));
    }
}
