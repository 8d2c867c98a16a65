//! Projected stochastic gradient ascent of the secrecy rate over the power
//! simplex `{d >= 0, sum d = P}`.
//!
//! The objective is the coupled-channel form
//! `E_g[log2(a + q)] - E_g[log2(1 + q)]`, `q = g^H D g`, whose gradient is
//! `dJ/dd_k = E[|g_k|^2 (1/(a+q) - 1/(1+q))] / ln 2`. Every coordinate of the
//! gradient is positive when `a < 1`, so the budget is always exhausted and
//! only the projection decides the split between antennas.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::channel::{mix, weighted_power, ChannelModel, GaussianStream, PowerAllocation, Side};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Moments, RateEstimate};
use crate::rate::{coupled_integrand, secrecy_rate_coupled_mc};

/// Euclidean projection of `v` onto `{d >= 0, sum d = budget}`.
///
/// Sort-based: find the threshold `theta` with `sum max(v_k - theta, 0) = budget`.
pub fn project_to_simplex(v: &[f64], budget: f64) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(budget.is_finite() && budget > 0.0) {
        return Err(invalid("P", format!("must be positive, got {budget}")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid("v", "entries must be finite"));
    }
    if v.len() == 1 {
        return Ok(vec![budget]);
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - budget) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    Ok(v.iter().map(|&x| (x - theta).max(0.0)).collect())
}

/// Monte Carlo gradient of the secrecy-rate objective, on common draws
/// across coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Standard error of each coordinate's deviation from the coordinate
    /// mean. Much smaller than `std_error` because common-mode noise cancels.
    pub centered_std_error: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
}

impl GradientEstimate {
    pub fn norm(&self) -> f64 {
        self.mean.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest `|grad_k - mean_j grad_j|` in units of its own standard error.
    pub fn spread_in_std_errors(&self) -> f64 {
        let n = self.mean.len() as f64;
        let avg = self.mean.iter().sum::<f64>() / n;
        self.mean
            .iter()
            .zip(&self.centered_std_error)
            .map(|(x, &se)| {
                let dev = (x - avg).abs();
                if se > 0.0 {
                    dev / se
                } else if dev == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Gradient and objective from one pass over the same draws.
fn gradient_pass(
    model: &ChannelModel,
    alloc: &PowerAllocation,
    n_samples: usize,
    seed: u64,
) -> Result<(GradientEstimate, RateEstimate)> {
    if alloc.len() != model.n_t() {
        return Err(Error::DimensionMismatch {
            expected: model.n_t(),
            got: alloc.len(),
        });
    }
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if !model.is_degraded() {
        return Err(Error::DegenerateRegime { a: model.a() });
    }
    let n_t = model.n_t();
    let a = model.a();
    let d = alloc.d();
    let stream = GaussianStream::new(n_t, model.sigma_g(), Side::Eavesdropper, seed)?;
    let parts = stream.map_chunks(n_samples, |chunk| {
        let mut coords = vec![Moments::new(); n_t];
        let mut centered = vec![Moments::new(); n_t];
        let mut objective = Moments::new();
        let mut values = vec![0.0; n_t];
        for row in chunk.chunks_exact(n_t) {
            let q = weighted_power(row, d);
            let w = (1.0 / (a + q) - 1.0 / (1.0 + q)) / LN_2;
            for (v, z) in values.iter_mut().zip(row) {
                *v = z.norm_sqr() * w;
            }
            let avg = values.iter().sum::<f64>() / n_t as f64;
            for ((m, c), &v) in coords.iter_mut().zip(centered.iter_mut()).zip(&values) {
                m.push(v);
                c.push(v - avg);
            }
            objective.push(coupled_integrand(a, q));
        }
        (coords, centered, objective)
    });
    let mut coords = vec![Moments::new(); n_t];
    let mut centered = vec![Moments::new(); n_t];
    let mut objective = Moments::new();
    for (c, k, o) in &parts {
        for (acc, m) in coords.iter_mut().zip(c) {
            acc.merge(m);
        }
        for (acc, m) in centered.iter_mut().zip(k) {
            acc.merge(m);
        }
        objective.merge(o);
    }
    let grad = GradientEstimate {
        mean: coords.iter().map(Moments::mean).collect(),
        std_error: coords.iter().map(Moments::std_error).collect(),
        centered_std_error: centered.iter().map(Moments::std_error).collect(),
        n_samples,
        seed,
    };
    Ok((grad, objective.into_estimate(seed)))
}

/// Gradient of the objective with respect to the diagonal allocation.
/// Refuses the degenerate regime `sigma_h <= sigma_g`, where the objective
/// is nonpositive everywhere.
pub fn grad_estimate(
    model: &ChannelModel,
    alloc: &PowerAllocation,
    n_samples: usize,
    seed: u64,
) -> Result<GradientEstimate> {
    gradient_pass(model, alloc, n_samples, seed).map(|(g, _)| g)
}

/// The optimisation objective; same estimator as the coupled secrecy rate.
pub fn objective_value(
    model: &ChannelModel,
    alloc: &PowerAllocation,
    n_samples: usize,
    seed: u64,
) -> Result<RateEstimate> {
    secrecy_rate_coupled_mc(model, alloc, n_samples, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    /// First step length, as a fraction of `P / ||grad||`.
    pub initial_step: f64,
    pub grad_samples: usize,
    pub seed: u64,
    /// Convergence tolerance on allocation movement, relative to `P`.
    pub tol: f64,
    /// Iterations sharing one set of draws before it is refreshed.
    pub refresh_every: usize,
    /// Lookback (in iterations) for the movement test.
    pub window: usize,
    /// Starting point; `None` draws one uniformly on the simplex from `seed`.
    pub start: Option<Vec<f64>>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 400,
            initial_step: 0.5,
            grad_samples: 100_000,
            seed: 0,
            tol: 1e-3,
            refresh_every: 10,
            window: 20,
            start: None,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(invalid("max_iters", "must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("tol", "must be positive"));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(invalid("initial_step", "must be positive"));
        }
        if self.grad_samples == 0 {
            return Err(Error::ZeroSamples);
        }
        if self.refresh_every == 0 || self.window == 0 {
            return Err(invalid("window", "refresh_every and window must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    /// Starting point followed by one entry per iteration.
    pub iterates: Vec<PowerAllocation>,
    /// Objective at each iterate that had a gradient evaluated (all but the last).
    pub objective_values: Vec<RateEstimate>,
    pub converged: bool,
}

impl OptimizerTrace {
    pub fn final_allocation(&self) -> &PowerAllocation {
        self.iterates.last().expect("trace always holds the start")
    }

    /// `max_k |d_k - P/n_t|` of the final iterate.
    pub fn max_deviation_from_uniform(&self) -> f64 {
        let last = self.final_allocation();
        let target = last.budget() / last.len() as f64;
        last.d().iter().map(|x| (x - target).abs()).fold(0.0, f64::max)
    }
}

/// Draws a point uniformly on the simplex of total `budget`.
pub fn random_simplex_point(n: usize, budget: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0x7374_6172_7421));
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| budget * x / s).collect()
}

/// Projected stochastic gradient ascent from `config.start` (or a random
/// start). Step `eta_t = eta_0 / sqrt(t)` with `eta_0 = initial_step * P / ||grad_1||`.
/// Converged when the allocation moved less than `tol * P` over the last
/// `window` iterations and the gradient coordinates agree within 3 standard
/// errors.
pub fn optimize_allocation(model: &ChannelModel, budget: f64, config: &OptimizerConfig) -> Result<OptimizerTrace> {
    config.validate()?;
    if !(budget.is_finite() && budget > 0.0) {
        return Err(invalid("P", format!("must be positive, got {budget}")));
    }
    if !model.is_degraded() {
        return Err(Error::DegenerateRegime { a: model.a() });
    }
    let n_t = model.n_t();
    let start = match &config.start {
        Some(v) if v.len() != n_t => {
            return Err(Error::DimensionMismatch {
                expected: n_t,
                got: v.len(),
            })
        }
        Some(v) => v.clone(),
        None => random_simplex_point(n_t, budget, config.seed),
    };
    let mut current = PowerAllocation::new(project_to_simplex(&start, budget)?, budget)?;
    let mut iterates = vec![current.clone()];
    let mut objective_values = Vec::new();
    let mut converged = false;
    let mut step0 = None;

    for t in 1..=config.max_iters {
        let draw_seed = mix(config.seed, ((t - 1) / config.refresh_every) as u64);
        let (grad, objective) = gradient_pass(model, &current, config.grad_samples, draw_seed)?;
        objective_values.push(objective);

        let eta0 = *step0.get_or_insert_with(|| {
            let norm = grad.norm();
            if norm > 0.0 {
                config.initial_step * budget / norm
            } else {
                0.0
            }
        });
        let eta = eta0 / (t as f64).sqrt();
        let moved: Vec<f64> = current.d().iter().zip(&grad.mean).map(|(x, g)| x + eta * g).collect();
        current = PowerAllocation::new(project_to_simplex(&moved, budget)?, budget)?;
        iterates.push(current.clone());

        if t >= config.window {
            let past = &iterates[iterates.len() - 1 - config.window];
            let movement = current
                .d()
                .iter()
                .zip(past.d())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if movement < config.tol * budget && grad.spread_in_std_errors() <= 3.0 {
                converged = true;
                break;
            }
        }
    }
    Ok(OptimizerTrace {
        iterates,
        objective_values,
        converged,
    })
}
