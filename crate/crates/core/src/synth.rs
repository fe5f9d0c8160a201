//! Seeded synthetic problems and the phase-transition experiment.
//!
//! All randomness comes from ChaCha8. A top-level `seed` selects the key and
//! every independent unit of work (one trial of one grid cell) draws from its
//! own stream, `stream = cell_index · trials + trial`, so results do not
//! depend on scheduling.

use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{ctranspose, tprod};
use crate::error::{Error, Result};
use crate::par::map_range;
use crate::solver::{solve, SolverConfig};
use crate::tensor::Tensor3;

/// Generator for `seed` on stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `P ∗ Q*` with `P` `n1 × r × n3`, `Q` `n2 × r × n3`, entries i.i.d.
/// `N(0, 1/n1)`.
pub fn gen_low_tubal_rank_with<R: Rng + ?Sized>(
    rng: &mut R,
    n1: usize,
    n2: usize,
    n3: usize,
    r: usize,
) -> Result<Tensor3> {
    let max = n1.min(n2);
    if r > max {
        return Err(Error::RankOutOfRange { rank: r, max });
    }
    if r == 0 {
        return Ok(Tensor3::zeros(n1, n2, n3));
    }
    let std = 1.0 / libm::sqrt(n1 as f64);
    let mut draw = |a: usize| {
        Tensor3::from_fn(a, r, n3, |_, _, _| {
            let z: f64 = rng.sample(StandardNormal);
            std * z
        })
    };
    let p = draw(n1);
    let q = draw(n2);
    tprod(&p, &ctranspose(&q))
}

pub fn gen_low_tubal_rank(n1: usize, n2: usize, n3: usize, r: usize, seed: u64) -> Result<Tensor3> {
    gen_low_tubal_rank_with(&mut stream_rng(seed, 0), n1, n2, n3, r)
}

/// Support model for the sparse component. Nonzeros are ±1 with equal
/// probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SparseModel {
    /// Exactly `m` entries, chosen uniformly without replacement.
    Count(usize),
    /// Each entry independently `+1` w.p. `ρ/2`, `−1` w.p. `ρ/2`, else `0`.
    Bernoulli(f64),
}

pub fn gen_sparse_with<R: Rng + ?Sized>(
    rng: &mut R,
    n1: usize,
    n2: usize,
    n3: usize,
    model: SparseModel,
) -> Result<Tensor3> {
    let mut t = Tensor3::zeros(n1, n2, n3);
    let capacity = t.len();
    match model {
        SparseModel::Count(m) => {
            if m > capacity {
                return Err(Error::CountOutOfRange { count: m, capacity });
            }
            let support = index::sample(rng, capacity, m);
            let data = t.as_mut_slice();
            for idx in support.iter() {
                data[idx] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            }
        }
        SparseModel::Bernoulli(rho) => {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::InvalidArgument("Bernoulli rate must lie in [0, 1]"));
            }
            let half = 0.5 * rho;
            for v in t.as_mut_slice() {
                let u: f64 = rng.random();
                *v = if u < half {
                    1.0
                } else if u < rho {
                    -1.0
                } else {
                    0.0
                };
            }
        }
    }
    Ok(t)
}

pub fn gen_sparse_bernoulli(
    n1: usize,
    n2: usize,
    n3: usize,
    model: SparseModel,
    seed: u64,
) -> Result<Tensor3> {
    gen_sparse_with(&mut stream_rng(seed, 0), n1, n2, n3, model)
}

/// A ground-truth pair and its sum.
#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub low_rank: Tensor3,
    pub sparse: Tensor3,
    pub observed: Tensor3,
}

impl SyntheticInstance {
    /// Draws the low-rank part, then the sparse part, from one generator.
    pub fn generate_with<R: Rng + ?Sized>(
        rng: &mut R,
        dims: (usize, usize, usize),
        rank: usize,
        model: SparseModel,
    ) -> Result<Self> {
        let (n1, n2, n3) = dims;
        let low_rank = gen_low_tubal_rank_with(rng, n1, n2, n3, rank)?;
        let sparse = gen_sparse_with(rng, n1, n2, n3, model)?;
        let observed = &low_rank + &sparse;
        Ok(Self { low_rank, sparse, observed })
    }

    pub fn generate(
        dims: (usize, usize, usize),
        rank: usize,
        model: SparseModel,
        seed: u64,
    ) -> Result<Self> {
        Self::generate_with(&mut stream_rng(seed, 0), dims, rank, model)
    }
}

/// One `(r/n, ρ_s)` cell of a phase-transition grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub r_frac: f64,
    pub rho_s: f64,
    pub trials: usize,
    pub successes: usize,
}

impl PhaseCell {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Recovery experiment over an `r/n × ρ_s` grid on `n × n × n3` tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseExperiment {
    pub n: usize,
    pub n3: usize,
    pub r_fracs: Vec<f64>,
    pub rho_ss: Vec<f64>,
    pub trials: usize,
    /// A trial succeeds when `‖L̂ − L0‖_F / ‖L0‖_F` is at most this.
    pub success_tol: f64,
    pub seed: u64,
    pub solver: SolverConfig,
}

impl PhaseExperiment {
    /// Tubal rank for a grid fraction: `round(r_frac·n)`, at least 1.
    pub fn rank_for(&self, r_frac: f64) -> usize {
        let r = libm::round(r_frac * self.n as f64) as usize;
        r.clamp(1, self.n)
    }

    /// Runs one trial; returns the relative recovery error of the low-rank part.
    pub fn trial_error(&self, r_frac: f64, rho_s: f64, stream: u64) -> Result<f64> {
        let mut rng = stream_rng(self.seed, stream);
        let inst = SyntheticInstance::generate_with(
            &mut rng,
            (self.n, self.n, self.n3),
            self.rank_for(r_frac),
            SparseModel::Bernoulli(rho_s),
        )?;
        let sol = solve(&inst.observed, &self.solver)?;
        Ok(sol.l_hat.rel_error(&inst.low_rank))
    }
}

/// Runs every trial of every cell. Cells are returned row-major: all `ρ_s`
/// values for the first `r/n`, then the next `r/n`, and so on.
pub fn phase_grid(exp: &PhaseExperiment) -> Result<Vec<PhaseCell>> {
    if exp.r_fracs.is_empty() || exp.rho_ss.is_empty() {
        return Err(Error::InvalidArgument("phase grid axes must be nonempty"));
    }
    if exp.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial per cell is required"));
    }
    for &f in &exp.r_fracs {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidArgument("rank fractions must lie in (0, 1]"));
        }
    }
    let cols = exp.rho_ss.len();
    let cells = exp.r_fracs.len() * cols;
    let outcomes = map_range(cells * exp.trials, |job| {
        let cell = job / exp.trials;
        let r_frac = exp.r_fracs[cell / cols];
        let rho_s = exp.rho_ss[cell % cols];
        exp.trial_error(r_frac, rho_s, job as u64)
            .map(|err| err <= exp.success_tol)
    });
    let mut out = Vec::with_capacity(cells);
    for cell in 0..cells {
        let mut successes = 0;
        for t in 0..exp.trials {
            if outcomes[cell * exp.trials + t].clone()? {
                successes += 1;
            }
        }
        out.push(PhaseCell {
            r_frac: exp.r_fracs[cell / cols],
            rho_s: exp.rho_ss[cell % cols],
            trials: exp.trials,
            successes,
        });
    }
    Ok(out)
}
