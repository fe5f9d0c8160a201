//! Pixel corruption and PSNR for image tensors.

use std::fmt;

use rand::seq::index;
use rand::Rng;
use trpca_core::synth::stream_rng;
use trpca_core::Tensor3;

use crate::error::{FormatError, Result};

/// Replaces `⌊fraction·n1·n2⌋` whole tubes, chosen uniformly without
/// replacement, with independent uniform values in `[0, 1)`. Returns the
/// corrupted tensor and the sorted `(row, column)` positions.
pub fn corrupt_pixels(
    a: &Tensor3,
    fraction: f64,
    seed: u64,
) -> Result<(Tensor3, Vec<(usize, usize)>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(trpca_core::Error::InvalidArgument("corruption fraction must lie in [0, 1]").into());
    }
    let (n1, n2, n3) = a.dims();
    let pixels = n1 * n2;
    let count = ((fraction * pixels as f64).floor() as usize).min(pixels);
    let mut rng = stream_rng(seed, 0);
    let chosen = index::sample(&mut rng, pixels, count).into_vec();
    let mut out = a.clone();
    for &p in &chosen {
        for k in 0..n3 {
            out.set(p / n2, p % n2, k, rng.random::<f64>());
        }
    }
    let mut mask: Vec<_> = chosen.into_iter().map(|p| (p / n2, p % n2)).collect();
    mask.sort_unstable();
    Ok((out, mask))
}

/// PSNR in decibels, or `Exact` when the estimate equals the reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Exact,
    Db(f64),
}

impl Psnr {
    /// `+∞` for `Exact`.
    pub fn db(self) -> f64 {
        match self {
            Psnr::Exact => f64::INFINITY,
            Psnr::Db(v) => v,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Exact => f.write_str("exact"),
            Psnr::Db(v) => write!(f, "{v}"),
        }
    }
}

/// `10·log10(‖M‖_∞² / MSE)` with the reference `M` supplying the peak.
pub fn psnr(reference: &Tensor3, estimate: &Tensor3) -> Result<Psnr> {
    if !reference.same_shape(estimate) {
        return Err(FormatError::ShapeMismatch(format!(
            "psnr of {:?} against {:?}",
            estimate.dims(),
            reference.dims()
        )));
    }
    let peak = reference.linf_norm();
    if peak == 0.0 {
        return Err(FormatError::ZeroReference);
    }
    let sq: f64 = reference
        .as_slice()
        .iter()
        .zip(estimate.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if sq == 0.0 {
        return Ok(Psnr::Exact);
    }
    let mse = sq / reference.len() as f64;
    Ok(Psnr::Db(10.0 * (peak * peak / mse).log10()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_psnr() {
        let m = Tensor3::from_fn(10, 10, 3, |_, _, _| 1.0);
        let e = m.map(|v| v - 0.1);
        let Psnr::Db(v) = psnr(&m, &e).unwrap() else { panic!() };
        assert!((v - 20.0).abs() < 1e-12);
        assert_eq!(psnr(&m, &m).unwrap(), Psnr::Exact);
    }

    #[test]
    fn corruption_count() {
        let a = Tensor3::zeros(7, 9, 3);
        let (_, mask) = corrupt_pixels(&a, 0.5, 1).unwrap();
        assert_eq!(mask.len(), 31);
        assert!(corrupt_pixels(&a, 1.5, 1).is_err());
    }
}
