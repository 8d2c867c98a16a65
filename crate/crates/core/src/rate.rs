//! Ergodic rates and the secrecy capacity, by three independent routes:
//!
//! * direct Monte Carlo: independent `h` and `g` streams, one log term each;
//! * coupled Monte Carlo: a single `g` stream with `h = (sigma_h / sigma_g) g`,
//!   so the per-sample integrand is `log2(1 + q/a) - log2(1 + q)` with
//!   `q = g^H D g`, `a = sigma_g^2 / sigma_h^2`;
//! * quadrature over the Gamma law of `||g||^2` (uniform allocation only).
//!
//! All rates are in bits.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::channel::{weighted_power, ChannelModel, GaussianStream, PowerAllocation, Side};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Moments, RateEstimate};
use crate::quadrature;

/// Default quadrature node count.
pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodTag {
    DirectMc,
    CoupledMc,
    Quadrature,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::DirectMc => "direct",
            MethodTag::CoupledMc => "coupled",
            MethodTag::Quadrature => "quad",
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" | "direct_mc" => Ok(MethodTag::DirectMc),
            "coupled" | "coupled_mc" => Ok(MethodTag::CoupledMc),
            "quad" | "quadrature" => Ok(MethodTag::Quadrature),
            other => Err(invalid("method", format!("unknown method `{other}`"))),
        }
    }
}

/// How an expectation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalMethod {
    DirectMc { n_samples: usize, seed: u64 },
    CoupledMc { n_samples: usize, seed: u64 },
    Quadrature { n_nodes: usize },
}

impl EvalMethod {
    pub fn from_tag(tag: MethodTag, n_samples: usize, n_nodes: usize, seed: u64) -> Self {
        match tag {
            MethodTag::DirectMc => EvalMethod::DirectMc { n_samples, seed },
            MethodTag::CoupledMc => EvalMethod::CoupledMc { n_samples, seed },
            MethodTag::Quadrature => EvalMethod::Quadrature { n_nodes },
        }
    }

    pub fn tag(&self) -> MethodTag {
        match self {
            EvalMethod::DirectMc { .. } => MethodTag::DirectMc,
            EvalMethod::CoupledMc { .. } => MethodTag::CoupledMc,
            EvalMethod::Quadrature { .. } => MethodTag::Quadrature,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            EvalMethod::DirectMc { seed, .. } | EvalMethod::CoupledMc { seed, .. } => Some(seed),
            EvalMethod::Quadrature { .. } => None,
        }
    }

    /// Sample count for MC methods, node count for quadrature.
    pub fn size(&self) -> usize {
        match *self {
            EvalMethod::DirectMc { n_samples, .. } | EvalMethod::CoupledMc { n_samples, .. } => n_samples,
            EvalMethod::Quadrature { n_nodes } => n_nodes,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            EvalMethod::DirectMc { n_samples: 0, .. } | EvalMethod::CoupledMc { n_samples: 0, .. } => {
                Err(Error::ZeroSamples)
            }
            EvalMethod::Quadrature { n_nodes } if n_nodes < quadrature::MIN_NODES => Err(invalid(
                "n_nodes",
                format!("need at least {}, got {n_nodes}", quadrature::MIN_NODES),
            )),
            _ => Ok(()),
        }
    }
}

impl Default for EvalMethod {
    fn default() -> Self {
        EvalMethod::CoupledMc {
            n_samples: 1_000_000,
            seed: 0,
        }
    }
}

fn check_alloc(n_t: usize, alloc: &PowerAllocation) -> Result<()> {
    if alloc.len() != n_t {
        return Err(Error::DimensionMismatch {
            expected: n_t,
            got: alloc.len(),
        });
    }
    Ok(())
}

/// Reduces per-chunk moments in chunk order.
fn accumulate(
    stream: &GaussianStream,
    n_samples: usize,
    f: impl Fn(&[num_complex::Complex64]) -> f64 + Sync,
) -> Moments {
    let n_t = stream.n_t;
    let parts = stream.map_chunks(n_samples, |chunk| chunk.chunks_exact(n_t).map(&f).collect::<Moments>());
    let mut total = Moments::new();
    for p in &parts {
        total.merge(p);
    }
    total
}

fn log_rate_moments(stream: &GaussianStream, alloc: &PowerAllocation, n_samples: usize) -> Moments {
    let d = alloc.d();
    accumulate(stream, n_samples, |g| weighted_power(g, d).ln_1p() / LN_2)
}

/// `E[log2(1 + sum_k d_k |g_k|^2)]` with `g ~ CN(0, sigma^2 I)`.
pub fn ergodic_log_rate_mc(sigma: f64, alloc: &PowerAllocation, n_samples: usize, seed: u64) -> Result<RateEstimate> {
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let stream = GaussianStream::new(alloc.len(), sigma, Side::Legitimate, seed)?;
    if alloc.is_zero() {
        return Ok(RateEstimate::exact(0.0, n_samples, seed));
    }
    Ok(log_rate_moments(&stream, alloc, n_samples).into_estimate(seed))
}

/// `E_h[log2(1 + h^H D h)] - E_g[log2(1 + g^H D g)]` from independent `h`
/// and `g` streams. The standard error combines both terms.
pub fn secrecy_rate_direct_mc(
    model: &ChannelModel,
    alloc: &PowerAllocation,
    n_samples: usize,
    seed: u64,
) -> Result<RateEstimate> {
    check_alloc(model.n_t(), alloc)?;
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if alloc.is_zero() {
        return Ok(RateEstimate::exact(0.0, n_samples, seed));
    }
    let h = GaussianStream::new(model.n_t(), model.sigma_h(), Side::Legitimate, seed)?;
    let g = GaussianStream::new(model.n_t(), model.sigma_g(), Side::Eavesdropper, seed)?;
    let legit = log_rate_moments(&h, alloc, n_samples);
    let eaves = log_rate_moments(&g, alloc, n_samples);
    Ok(RateEstimate {
        mean: legit.mean() - eaves.mean(),
        std_error: legit.std_error().hypot(eaves.std_error()),
        n_samples,
        seed,
    })
}

/// Per-sample integrand of the coupled estimator, in bits.
#[inline]
pub fn coupled_integrand(a: f64, q: f64) -> f64 {
    ((q / a).ln_1p() - q.ln_1p()) / LN_2
}

/// Same target as [`secrecy_rate_direct_mc`], evaluated on one shared
/// eavesdropper stream through the coupled channel `h = g / sqrt(a)`.
///
/// At equal seeds this reads the same eavesdropper draws as the direct
/// estimator, so compare the two with different seeds.
pub fn secrecy_rate_coupled_mc(
    model: &ChannelModel,
    alloc: &PowerAllocation,
    n_samples: usize,
    seed: u64,
) -> Result<RateEstimate> {
    check_alloc(model.n_t(), alloc)?;
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if alloc.is_zero() {
        return Ok(RateEstimate::exact(0.0, n_samples, seed));
    }
    let g = GaussianStream::new(model.n_t(), model.sigma_g(), Side::Eavesdropper, seed)?;
    let a = model.a();
    let d = alloc.d();
    Ok(accumulate(&g, n_samples, |row| coupled_integrand(a, weighted_power(row, d))).into_estimate(seed))
}

/// Secrecy rate of an arbitrary allocation by the chosen method (no clamp).
/// Quadrature only accepts uniform allocations.
pub fn secrecy_rate(model: &ChannelModel, alloc: &PowerAllocation, method: EvalMethod) -> Result<RateEstimate> {
    method.validate()?;
    match method {
        EvalMethod::DirectMc { n_samples, seed } => secrecy_rate_direct_mc(model, alloc, n_samples, seed),
        EvalMethod::CoupledMc { n_samples, seed } => secrecy_rate_coupled_mc(model, alloc, n_samples, seed),
        EvalMethod::Quadrature { n_nodes } => {
            check_alloc(model.n_t(), alloc)?;
            let first = alloc.d()[0];
            if alloc.d().iter().any(|&x| x != first) {
                return Err(invalid("alloc", "quadrature requires a uniform allocation"));
            }
            let power = alloc.total();
            let legit = quadrature::ergodic_log_rate_quadrature(model.sigma_h(), power, model.n_t(), n_nodes)?;
            let eaves = quadrature::ergodic_log_rate_quadrature(model.sigma_g(), power, model.n_t(), n_nodes)?;
            Ok(RateEstimate::exact(legit - eaves, n_nodes, 0))
        }
    }
}

/// Ergodic secrecy capacity with statistical CSIT: 0 unless
/// `sigma_h > sigma_g`, otherwise the uniform-allocation rate.
pub fn secrecy_capacity(model: &ChannelModel, power: f64, method: EvalMethod) -> Result<RateEstimate> {
    if !(power.is_finite() && power >= 0.0) {
        return Err(invalid("P", format!("must be nonnegative, got {power}")));
    }
    method.validate()?;
    if !model.is_degraded() {
        return Ok(RateEstimate::exact(0.0, method.size(), method.seed().unwrap_or(0)));
    }
    let alloc = PowerAllocation::uniform(model.n_t(), power)?;
    secrecy_rate(model, &alloc, method)
}

/// High-SNR limit `2 log2(sigma_h / sigma_g)`; 0 when `sigma_h <= sigma_g`.
pub fn asymptote_high_snr(model: &ChannelModel) -> f64 {
    if !model.is_degraded() {
        return 0.0;
    }
    2.0 * (model.sigma_h() / model.sigma_g()).log2()
}

/// Large-`n_t` limit `log2(1 + P sigma_h^2) - log2(1 + P sigma_g^2)`,
/// floored at 0 like the capacity itself.
pub fn asymptote_large_nt(model: &ChannelModel, power: f64) -> f64 {
    let legit = (power * model.sigma_h() * model.sigma_h()).ln_1p();
    let eaves = (power * model.sigma_g() * model.sigma_g()).ln_1p();
    ((legit - eaves) / LN_2).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n_t: usize, h: f64, g: f64) -> ChannelModel {
        ChannelModel::new(n_t, h, g).unwrap()
    }

    #[test]
    fn coupled_integrand_vanishes_at_unit_ratio() {
        for q in [0.0, 1e-12, 0.3, 7.0, 1e9] {
            assert_eq!(coupled_integrand(1.0, q), 0.0);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let m = model(2, 1.0, 0.5);
        let d = PowerAllocation::uniform(2, 1.0).unwrap();
        assert_eq!(secrecy_rate_coupled_mc(&m, &d, 0, 1), Err(Error::ZeroSamples));
        assert_eq!(secrecy_rate_direct_mc(&m, &d, 0, 1), Err(Error::ZeroSamples));
        assert_eq!(ergodic_log_rate_mc(1.0, &d, 0, 1), Err(Error::ZeroSamples));
    }

    #[test]
    fn quadrature_rejects_non_uniform() {
        let m = model(2, 1.0, 0.5);
        let d = PowerAllocation::new(vec![1.0, 0.0], 1.0).unwrap();
        assert!(secrecy_rate(&m, &d, EvalMethod::Quadrature { n_nodes: 64 }).is_err());
    }

    #[test]
    fn asymptotes() {
        assert!((asymptote_high_snr(&model(3, 2.0, 1.0)) - 2.0).abs() < 1e-15);
        assert!((asymptote_high_snr(&model(3, 2f64.sqrt(), 1.0)) - 1.0).abs() < 1e-15);
        assert_eq!(asymptote_high_snr(&model(3, 1.0, 1.0)), 0.0);
        assert_eq!(asymptote_large_nt(&model(3, 1.0, 0.5), 0.0), 0.0);
        assert_eq!(asymptote_large_nt(&model(3, 0.5, 1.0), 10.0), 0.0);
    }

    #[test]
    fn method_tags_round_trip() {
        for tag in [MethodTag::DirectMc, MethodTag::CoupledMc, MethodTag::Quadrature] {
            assert_eq!(tag.as_str().parse::<MethodTag>().unwrap(), tag);
        }
        assert!("bogus".parse::<MethodTag>().is_err());
    }
}
