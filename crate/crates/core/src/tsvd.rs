//! t-SVD and the rank notions derived from it.
//!
//! Every routine here decomposes only the Fourier slices `0..=n3/2`. The
//! remaining slices take conjugated copies of those factors, which keeps the
//! Fourier factors conjugate-symmetric and therefore the real-domain factors
//! real. Decomposing all `n3` slices independently does not: matrix SVDs are
//! only unique up to unit phases per singular pair, so the independent
//! factors of mirrored slices generally fail to be conjugates of each other.
//!
//! Self-conjugate slices (0, and `n3/2` for even `n3`) are real and go
//! through a real SVD.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::algebra::{ctranspose, tprod};
use crate::error::{Error, Result};
use crate::fourier::{from_half_spectrum, half_spectrum, is_self_conjugate, slice_weight};
use crate::par::map_range;
use crate::tensor::Tensor3;
use crate::C64;

/// Relative threshold below which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// SVD of one Fourier slice: `M = U·diag(σ)·Vᴴ` with `p = min(n1, n2)`
/// columns in `U` and `V` and `σ` descending.
#[derive(Debug, Clone)]
pub struct SliceSvd {
    pub u: DMatrix<C64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<C64>,
}

impl SliceSvd {
    /// `U[:, ..count]·diag(σ')·V[:, ..count]ᴴ` for replacement values `σ'`.
    pub fn recompose_with(&self, values: &[f64]) -> DMatrix<C64> {
        let count = values.len();
        let mut us = self.u.columns(0, count).into_owned();
        for (c, &s) in values.iter().enumerate() {
            us.column_mut(c).scale_mut(s);
        }
        us * self.v.columns(0, count).adjoint()
    }
}

/// Half-spectrum SVDs of a real tensor.
#[derive(Debug, Clone)]
pub struct FourierSvd {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// SVDs of Fourier slices `0..=n3/2`.
    pub slices: Vec<SliceSvd>,
}

impl FourierSvd {
    /// Number of matrix SVDs that were computed.
    pub fn computed_svds(&self) -> usize {
        self.slices.len()
    }

    /// `S(i, i, 1) = (1/n3)·Σ_j S̄(i, i, j)`, using slice multiplicities.
    pub fn tensor_singular_values(&self) -> Vec<f64> {
        let p = self.n1.min(self.n2);
        let mut out = vec![0.0; p];
        for (k, s) in self.slices.iter().enumerate() {
            let w = slice_weight(k, self.n3) as f64;
            for (o, v) in out.iter_mut().zip(&s.sigma) {
                *o += w * v;
            }
        }
        let inv = 1.0 / self.n3 as f64;
        out.iter_mut().for_each(|v| *v *= inv);
        out
    }

    /// Largest Fourier-domain singular value over all slices.
    pub fn max_sigma(&self) -> f64 {
        self.slices
            .iter()
            .filter_map(|s| s.sigma.first().copied())
            .fold(0.0, f64::max)
    }
}

fn svd_iteration_cap(n1: usize, n2: usize) -> usize {
    1000 * (n1.min(n2) + 1)
}

/// Deterministic, descending SVD of one slice. `real` selects a real SVD
/// for slices that are known to be real.
pub fn slice_svd(m: &DMatrix<C64>, real: bool, vectors: bool, slice: usize) -> Result<SliceSvd> {
    let (n1, n2) = m.shape();
    let p = n1.min(n2);
    if p == 0 {
        return Ok(SliceSvd {
            u: DMatrix::zeros(n1, 0),
            sigma: Vec::new(),
            v: DMatrix::zeros(n2, 0),
        });
    }
    let eps = 5.0 * f64::EPSILON;
    let cap = svd_iteration_cap(n1, n2);
    if real {
        let mr = m.map(|c| c.re);
        let svd = mr
            .try_svd(vectors, vectors, eps, cap)
            .ok_or(Error::NumericalFailure { slice })?;
        let sigma = svd.singular_values.iter().copied().collect();
        let (u, v) = match (svd.u, svd.v_t) {
            (Some(u), Some(vt)) => (
                u.map(|x| C64::new(x, 0.0)),
                vt.transpose().map(|x| C64::new(x, 0.0)),
            ),
            _ => (DMatrix::zeros(n1, 0), DMatrix::zeros(n2, 0)),
        };
        Ok(SliceSvd { u, sigma, v })
    } else {
        let svd = m
            .clone()
            .try_svd(vectors, vectors, eps, cap)
            .ok_or(Error::NumericalFailure { slice })?;
        let sigma = svd.singular_values.iter().copied().collect();
        let (u, v) = match (svd.u, svd.v_t) {
            (Some(u), Some(vt)) => (u, vt.adjoint()),
            _ => (DMatrix::zeros(n1, 0), DMatrix::zeros(n2, 0)),
        };
        Ok(SliceSvd { u, sigma, v })
    }
}

/// SVDs of the half spectrum of `a`.
pub fn fourier_svd(a: &Tensor3, vectors: bool) -> Result<FourierSvd> {
    let (n1, n2, n3) = a.dims();
    let half = half_spectrum(a);
    let slices = map_range(half.len(), |k| {
        slice_svd(&half[k], is_self_conjugate(k, n3), vectors, k)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(FourierSvd { n1, n2, n3, slices })
}

/// Per-slice singular values of all `n3` Fourier slices (mirrored slices
/// repeat their partner's values).
pub fn fourier_singular_values(a: &Tensor3) -> Result<Vec<Vec<f64>>> {
    let fs = fourier_svd(a, false)?;
    let n3 = a.n3();
    Ok((0..n3)
        .map(|k| {
            let src = if k < fs.slices.len() { k } else { n3 - k };
            fs.slices[src].sigma.clone()
        })
        .collect())
}

/// Extends orthonormal columns to a unitary `n × n` matrix. Candidates are
/// the standard basis vectors, taken greedily by largest residual after two
/// rounds of Gram–Schmidt.
fn complete_unitary(q: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let p = q.ncols();
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..p).map(|c| q.column(c).into_owned()).collect();
    let mut used = vec![false; n];
    while cols.len() < n {
        let mut best: Option<(usize, nalgebra::DVector<C64>, f64)> = None;
        for (e, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut v = nalgebra::DVector::<C64>::zeros(n);
            v[e] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let proj = c.dotc(&v);
                    v -= c * proj;
                }
            }
            let norm = v.norm();
            if best.as_ref().map_or(true, |b| norm > b.2) {
                best = Some((e, v, norm));
            }
        }
        let (e, v, norm) = best.expect("a unitary completion always exists");
        used[e] = true;
        cols.push(v.unscale(norm));
    }
    DMatrix::from_columns(&cols)
}

/// Whether a t-SVD carries full square orthogonal factors or only the
/// leading `r` lateral slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Full,
    Skinny,
}

/// `A = U ∗ S ∗ V*`.
#[derive(Debug, Clone)]
pub struct TSvdFactors {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
    pub kind: FactorKind,
    /// Matrix SVDs performed, `⌊n3/2⌋ + 1`.
    pub fourier_svds: usize,
    /// Largest relative imaginary residual of the three inverse transforms
    /// before it was discarded.
    pub realness_residual: f64,
}

impl TSvdFactors {
    /// Number of lateral slices kept (`r` for skinny factors).
    pub fn width(&self) -> usize {
        self.u.n2()
    }

    /// `U ∗ S ∗ V*`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        tprod(&self.u, &tprod(&self.s, &ctranspose(&self.v))?)
    }

    /// Diagonal of the first frontal slice of `S`.
    pub fn singular_values(&self) -> Vec<f64> {
        let p = self.s.n1().min(self.s.n2());
        (0..p).map(|i| self.s.get(i, i, 0)).collect()
    }
}

fn diag_block(n1: usize, n2: usize, values: &[f64]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n1, n2);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = C64::new(v, 0.0);
    }
    m
}

fn inverse_factors(
    u: &[DMatrix<C64>],
    s: &[DMatrix<C64>],
    v: &[DMatrix<C64>],
    n3: usize,
) -> Result<(Tensor3, Tensor3, Tensor3, f64)> {
    let (ut, ru) = from_half_spectrum(u, n3)?;
    let (st, rs) = from_half_spectrum(s, n3)?;
    let (vt, rv) = from_half_spectrum(v, n3)?;
    Ok((ut, st, vt, ru.max(rs).max(rv)))
}

/// Full t-SVD: `U` is `n1 × n1 × n3`, `S` is `n1 × n2 × n3` f-diagonal,
/// `V` is `n2 × n2 × n3`, all real.
pub fn tsvd(a: &Tensor3) -> Result<TSvdFactors> {
    let (n1, n2, n3) = a.dims();
    let fs = fourier_svd(a, true)?;
    let mut ub = Vec::with_capacity(fs.slices.len());
    let mut sb = Vec::with_capacity(fs.slices.len());
    let mut vb = Vec::with_capacity(fs.slices.len());
    for sl in &fs.slices {
        ub.push(complete_unitary(&sl.u, n1));
        sb.push(diag_block(n1, n2, &sl.sigma));
        vb.push(complete_unitary(&sl.v, n2));
    }
    let (u, s, v, realness_residual) = inverse_factors(&ub, &sb, &vb, n3)?;
    Ok(TSvdFactors {
        u,
        s,
        v,
        kind: FactorKind::Full,
        fourier_svds: fs.computed_svds(),
        realness_residual,
    })
}

fn count_above(values: &[f64], rank_tol: f64) -> usize {
    match values.first() {
        Some(&top) if top > 0.0 => values.iter().filter(|&&v| v > rank_tol * top).count(),
        _ => 0,
    }
}

fn check_rank_tol(rank_tol: f64) -> Result<()> {
    if rank_tol > 0.0 && rank_tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("rank tolerance must be positive"))
    }
}

/// Skinny t-SVD keeping the `r = tubal_rank(a, rank_tol)` leading lateral
/// slices: `U` is `n1 × r × n3`, `S` is `r × r × n3`, `V` is `n2 × r × n3`.
pub fn skinny_tsvd(a: &Tensor3, rank_tol: f64) -> Result<TSvdFactors> {
    check_rank_tol(rank_tol)?;
    let (n1, n2, n3) = a.dims();
    let fs = fourier_svd(a, true)?;
    let r = count_above(&fs.tensor_singular_values(), rank_tol);
    if r == 0 {
        return Ok(TSvdFactors {
            u: Tensor3::zeros(n1, 0, n3),
            s: Tensor3::zeros(0, 0, n3),
            v: Tensor3::zeros(n2, 0, n3),
            kind: FactorKind::Skinny,
            fourier_svds: fs.computed_svds(),
            realness_residual: 0.0,
        });
    }
    let ub: Vec<_> = fs.slices.iter().map(|s| s.u.columns(0, r).into_owned()).collect();
    let sb: Vec<_> = fs.slices.iter().map(|s| diag_block(r, r, &s.sigma[..r])).collect();
    let vb: Vec<_> = fs.slices.iter().map(|s| s.v.columns(0, r).into_owned()).collect();
    let (u, s, v, realness_residual) = inverse_factors(&ub, &sb, &vb, n3)?;
    Ok(TSvdFactors {
        u,
        s,
        v,
        kind: FactorKind::Skinny,
        fourier_svds: fs.computed_svds(),
        realness_residual,
    })
}

/// Tensor singular values: the diagonal of `S(:, :, 1)`, nonincreasing.
pub fn singular_values(a: &Tensor3) -> Result<Vec<f64>> {
    Ok(fourier_svd(a, false)?.tensor_singular_values())
}

/// Number of singular values above `rank_tol` times the largest one.
pub fn tubal_rank(a: &Tensor3, rank_tol: f64) -> Result<usize> {
    check_rank_tol(rank_tol)?;
    Ok(count_above(&singular_values(a)?, rank_tol))
}

/// `(1/n3)·rank(bcirc(A)) = (1/n3)·Σ_j rank(Ā⁽ʲ⁾)`, with each Fourier
/// slice rank counted against `rank_tol` times the largest Fourier singular
/// value of the whole tensor.
pub fn average_rank(a: &Tensor3, rank_tol: f64) -> Result<f64> {
    check_rank_tol(rank_tol)?;
    let fs = fourier_svd(a, false)?;
    let top = fs.max_sigma();
    if top == 0.0 {
        return Ok(0.0);
    }
    let total: usize = fs
        .slices
        .iter()
        .enumerate()
        .map(|(k, s)| {
            slice_weight(k, fs.n3) * s.sigma.iter().filter(|&&v| v > rank_tol * top).count()
        })
        .sum();
    Ok(total as f64 / fs.n3 as f64)
}

/// Best approximation of tubal rank at most `k`: every Fourier slice keeps
/// its `k` leading singular triplets.
pub fn best_rank_k(a: &Tensor3, k: usize) -> Result<Tensor3> {
    let (n1, n2, n3) = a.dims();
    let max = n1.min(n2);
    if k > max {
        return Err(Error::RankOutOfRange { rank: k, max });
    }
    if k == 0 {
        return Ok(Tensor3::zeros(n1, n2, n3));
    }
    let fs = fourier_svd(a, true)?;
    let slices: Vec<_> = map_range(fs.slices.len(), |j| {
        let s = &fs.slices[j];
        s.recompose_with(&s.sigma[..k])
    });
    Ok(from_half_spectrum(&slices, n3)?.0)
}
