//! ADMM for tensor robust PCA:
//!
//! ```text
//! min ‖L‖_* + λ‖E‖_1   s.t.   X = L + E
//! ```
//!
//! Each iteration performs
//!
//! ```text
//! L ← D_{1/μ}(X − E − Y/μ)            (t-SVT)
//! E ← soft(X − L − Y/μ, λ/μ)
//! Y ← Y + μ(L + E − X)
//! μ ← min(ρμ, μ_max)
//! ```
//!
//! and stops once `‖ΔL‖_∞`, `‖ΔE‖_∞` and `‖L + E − X‖_∞` are all at most `ε`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prox::{soft_threshold, tsvt};
use crate::tensor::Tensor3;

/// `λ = 1/√(max(n1, n2)·n3)`.
pub fn default_lambda(n1: usize, n2: usize, n3: usize) -> f64 {
    1.0 / libm::sqrt((n1.max(n2) * n3) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Weight of the ℓ1 term; `None` selects [`default_lambda`] for the input.
    pub lambda: Option<f64>,
    pub rho: f64,
    pub mu0: f64,
    pub mu_max: f64,
    pub eps: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: None,
            rho: 1.1,
            mu0: 1e-3,
            mu_max: 1e10,
            eps: 1e-8,
            max_iters: 500,
        }
    }
}

impl SolverConfig {
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidArgument("lambda must be positive"));
            }
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return Err(Error::InvalidArgument("rho must exceed 1"));
        }
        if !(self.mu0 > 0.0 && self.mu0 < self.mu_max && self.mu_max.is_finite()) {
            return Err(Error::InvalidArgument("need 0 < mu0 < mu_max"));
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be positive"));
        }
        Ok(())
    }

    /// λ actually used for an input of the given shape.
    pub fn lambda_for(&self, dims: (usize, usize, usize)) -> f64 {
        self.lambda
            .unwrap_or_else(|| default_lambda(dims.0, dims.1, dims.2))
    }
}

/// Output of [`solve`]. Not converging within `max_iters` is reported
/// through `converged`, not as an error.
#[derive(Debug, Clone)]
pub struct TrpcaSolution {
    pub l_hat: Tensor3,
    pub e_hat: Tensor3,
    pub lambda: f64,
    pub iters: usize,
    /// `‖L + E − X‖_∞` at exit.
    pub final_residual: f64,
    pub converged: bool,
    /// Per iteration, the largest of the three stopping quantities.
    pub residual_history: Vec<f64>,
    /// `μ_k` used in iteration `k`.
    pub mu_history: Vec<f64>,
}

pub fn solve(x: &Tensor3, cfg: &SolverConfig) -> Result<TrpcaSolution> {
    cfg.validate()?;
    let (n1, n2, n3) = x.dims();
    let lambda = cfg.lambda_for(x.dims());

    let mut l = Tensor3::zeros(n1, n2, n3);
    let mut e = Tensor3::zeros(n1, n2, n3);
    let mut y = Tensor3::zeros(n1, n2, n3);
    let mut mu = cfg.mu0;
    let mut residual_history = Vec::new();
    let mut mu_history = Vec::new();
    let mut converged = false;
    let mut final_residual = x.linf_norm();
    let mut iters = 0;

    while iters < cfg.max_iters {
        iters += 1;
        mu_history.push(mu);
        let inv_mu = 1.0 / mu;

        let target_l = fill3(Tensor3::zeros(n1, n2, n3), x, &e, &y, inv_mu);
        let l_next = tsvt(&target_l, inv_mu)?;

        let target_e = fill3(Tensor3::zeros(n1, n2, n3), x, &l_next, &y, inv_mu);
        let e_next = soft_threshold(&target_e, lambda * inv_mu);

        let mut primal = 0.0f64;
        for (((yv, &lv), &ev), &xv) in y
            .as_mut_slice()
            .iter_mut()
            .zip(l_next.as_slice())
            .zip(e_next.as_slice())
            .zip(x.as_slice())
        {
            let r = lv + ev - xv;
            primal = primal.max(r.abs());
            *yv += mu * r;
        }
        mu = (cfg.rho * mu).min(cfg.mu_max);

        let dl = l_next.max_abs_diff(&l);
        let de = e_next.max_abs_diff(&e);
        l = l_next;
        e = e_next;
        final_residual = primal;
        residual_history.push(dl.max(de).max(primal));

        if dl <= cfg.eps && de <= cfg.eps && primal <= cfg.eps {
            converged = true;
            break;
        }
    }

    Ok(TrpcaSolution {
        l_hat: l,
        e_hat: e,
        lambda,
        iters,
        final_residual,
        converged,
        residual_history,
        mu_history,
    })
}

/// `out = x − sub − inv_mu·y`, reusing `out`'s buffer.
fn fill3(mut out: Tensor3, x: &Tensor3, sub: &Tensor3, y: &Tensor3, inv_mu: f64) -> Tensor3 {
    for (((o, &xv), &sv), &yv) in out
        .as_mut_slice()
        .iter_mut()
        .zip(x.as_slice())
        .zip(sub.as_slice())
        .zip(y.as_slice())
    {
        *o = xv - sv - inv_mu * yv;
    }
    out
}
