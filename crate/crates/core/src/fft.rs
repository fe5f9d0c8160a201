//! Complex FFT of arbitrary length.
//!
//! Lengths whose prime factors are all small use a recursive mixed-radix
//! decimation-in-time transform. Lengths with a large prime factor go through
//! Bluestein's chirp-z algorithm on a power-of-two grid.
//!
//! Forward transforms are unnormalized: `X[j] = Σ_k x[k]·exp(-2πi·jk/n)`.
//! The inverse returned by [`FftPlan::inverse`] is scaled by `1/n`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::C64;

/// Largest prime handled by a direct butterfly inside the mixed-radix path.
const MAX_RADIX: usize = 31;

#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    algo: Algo,
}

#[derive(Debug, Clone)]
enum Algo {
    Trivial,
    MixedRadix {
        factors: Vec<usize>,
        roots: Vec<C64>,
    },
    Bluestein {
        chirp: Vec<C64>,
        kernel: Vec<C64>,
        inner: Box<FftPlan>,
    },
}

fn unit_root(num: usize, den: usize, sign: f64) -> C64 {
    // exp(sign·2πi·num/den) with num reduced mod den by the caller
    let theta = sign * 2.0 * PI * (num as f64) / (den as f64);
    C64::new(libm::cos(theta), libm::sin(theta))
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        if len <= 1 {
            return Self { len, algo: Algo::Trivial };
        }
        let factors = factorize(len);
        if factors.iter().all(|&p| p <= MAX_RADIX) {
            let roots = (0..len).map(|k| unit_root(k, len, -1.0)).collect();
            return Self { len, algo: Algo::MixedRadix { factors, roots } };
        }

        let m = (2 * len - 1).next_power_of_two();
        let two_n = 2 * len;
        let chirp: Vec<C64> = (0..len)
            .map(|k| {
                // exp(-iπk²/n), k² reduced mod 2n to keep the angle small
                let k2 = (k as u128 * k as u128 % two_n as u128) as usize;
                unit_root(k2, two_n, -1.0)
            })
            .collect();
        let inner = FftPlan::new(m);
        let mut kernel = vec![C64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        let mut scratch = Vec::new();
        inner.forward_with_scratch(&mut kernel, &mut scratch);
        let scale = 1.0 / m as f64;
        for v in kernel.iter_mut() {
            *v *= scale;
        }
        Self {
            len,
            algo: Algo::Bluestein { chirp, kernel, inner: Box::new(inner) },
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward DFT in place.
    pub fn forward(&self, data: &mut [C64]) {
        let mut scratch = Vec::new();
        self.forward_with_scratch(data, &mut scratch);
    }

    /// Inverse DFT in place, including the `1/n` factor.
    pub fn inverse(&self, data: &mut [C64]) {
        let mut scratch = Vec::new();
        self.inverse_with_scratch(data, &mut scratch);
    }

    pub fn forward_with_scratch(&self, data: &mut [C64], scratch: &mut Vec<C64>) {
        assert_eq!(data.len(), self.len, "FFT buffer length does not match plan");
        match &self.algo {
            Algo::Trivial => {}
            Algo::MixedRadix { factors, roots } => {
                scratch.clear();
                scratch.extend_from_slice(data);
                mixed_radix(scratch, 0, 1, self.len, factors, roots, 1, data);
            }
            Algo::Bluestein { chirp, kernel, inner } => {
                let m = kernel.len();
                scratch.clear();
                scratch.resize(m, C64::new(0.0, 0.0));
                for (k, (s, x)) in scratch.iter_mut().zip(data.iter()).enumerate() {
                    *s = *x * chirp[k];
                }
                let mut inner_scratch = Vec::with_capacity(m);
                inner.forward_with_scratch(scratch, &mut inner_scratch);
                for (s, w) in scratch.iter_mut().zip(kernel.iter()) {
                    *s = (*s * *w).conj();
                }
                inner.forward_with_scratch(scratch, &mut inner_scratch);
                for (j, x) in data.iter_mut().enumerate() {
                    *x = scratch[j].conj() * chirp[j];
                }
            }
        }
    }

    pub fn inverse_with_scratch(&self, data: &mut [C64], scratch: &mut Vec<C64>) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward_with_scratch(data, scratch);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v = v.conj() * scale;
        }
    }
}

/// Decimation in time: `out[..n]` receives the DFT of
/// `input[offset], input[offset + stride], ...`. The root table holds the
/// `N`-th roots of unity for the top-level length `N`; `root_stride = N / n`.
#[allow(clippy::too_many_arguments)]
fn mixed_radix(
    input: &[C64],
    offset: usize,
    stride: usize,
    n: usize,
    factors: &[usize],
    roots: &[C64],
    root_stride: usize,
    out: &mut [C64],
) {
    if n == 1 {
        out[0] = input[offset];
        return;
    }
    let p = factors[0];
    let m = n / p;
    for r in 0..p {
        mixed_radix(
            input,
            offset + r * stride,
            stride * p,
            m,
            &factors[1..],
            roots,
            root_stride * p,
            &mut out[r * m..(r + 1) * m],
        );
    }

    // out[r*m + k] holds Y_r[k]; X[k + q*m] = Σ_r W_n^{r(k+qm)} Y_r[k].
    // For fixed k the inputs and outputs occupy the same p positions.
    let mut twiddled = [C64::new(0.0, 0.0); MAX_RADIX + 1];
    let radix_step = m * root_stride;
    for k in 0..m {
        for r in 0..p {
            let w = roots[(r * k % n) * root_stride];
            twiddled[r] = out[r * m + k] * w;
        }
        for q in 0..p {
            let mut acc = twiddled[0];
            for r in 1..p {
                acc += twiddled[r] * roots[(r * q % p) * radix_step];
            }
            out[k + q * m] = acc;
        }
    }
}
