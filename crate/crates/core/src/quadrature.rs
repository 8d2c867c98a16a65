//! Fixed-node quadrature for expectations over a Gamma law.
//!
//! For `U ~ Gamma(n, 1)` the log-variable `Y = ln U` has density
//! `exp(n y - e^y) / Gamma(n)`: double-exponential decay to the right but only
//! exponential decay (rate `n`) to the left. The substitution
//!
//! ```text
//! y = ln n + (t - e^{-t}) / sqrt(n)
//! ```
//!
//! makes the left tail double-exponential as well, and the trapezoid rule in
//! `t` then converges geometrically for integrands that are analytic in `y`,
//! such as `ln(1 + c e^y)`. Unlike Gauss-Laguerre, the accuracy does not
//! degrade when `c` is large: the kink of `ln(1 + c x)` at `x ~ 1/c` becomes a
//! smooth ramp in the log variable.

use crate::error::{invalid, Result};

/// Minimum node count accepted by the public evaluators.
pub const MIN_NODES: usize = 8;

/// Log-integrand drop (in nats) from the peak at which the `t` range is cut.
const TAIL_DROP: f64 = 38.0;

/// `ln Gamma(n)` for a positive integer `n`.
pub fn ln_gamma_int(n: usize) -> f64 {
    (2..n).map(|k| (k as f64).ln()).sum()
}

/// Nodes `u_i` and weights `w_i` with `sum_i w_i f(u_i) ~ E[f(U)]`,
/// `U ~ Gamma(shape, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GammaRule {
    pub fn new(shape: usize, n_nodes: usize) -> Result<Self> {
        if shape == 0 {
            return Err(invalid("shape", "must be at least 1"));
        }
        if n_nodes < MIN_NODES {
            return Err(invalid("n_nodes", format!("need at least {MIN_NODES}, got {n_nodes}")));
        }
        let n = shape as f64;
        let centre = n.ln();
        let width = 1.0 / n.sqrt();
        let ln_norm = ln_gamma_int(shape);

        let y_of = |t: f64| centre + width * (t - (-t).exp());
        let log_weight = |t: f64| {
            let y = y_of(t);
            n * y - y.exp() - ln_norm + (width * (1.0 + (-t).exp())).ln()
        };

        let (lo_bracket, hi_bracket) = (-10.0, 60.0);
        let peak_t = golden_max(&log_weight, lo_bracket, hi_bracket);
        let cut = log_weight(peak_t) - TAIL_DROP;
        let lo = bisect(|t| log_weight(t) - cut, lo_bracket, peak_t);
        let hi = bisect(|t| log_weight(t) - cut, peak_t, hi_bracket);

        let h = (hi - lo) / (n_nodes - 1) as f64;
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        for i in 0..n_nodes {
            let t = lo + h * i as f64;
            nodes.push(y_of(t).exp());
            weights.push(h * log_weight(t).exp());
        }
        Ok(Self { nodes, weights })
    }

    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(u)).sum()
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of `f` on `[a, b]`, assuming a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa_neg = f(a) < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) < 0.0) == fa_neg {
            a = m;
        } else {
            b = m;
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

/// `E[log2(1 + (P / n_t) ||g||^2)]` with `g ~ CN(0, sigma^2 I_{n_t})`,
/// i.e. `||g||^2 ~ Gamma(n_t, sigma^2)`.
pub fn ergodic_log_rate_quadrature(sigma: f64, power: f64, n_t: usize, n_nodes: usize) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("sigma", format!("must be positive, got {sigma}")));
    }
    if !(power.is_finite() && power >= 0.0) {
        return Err(invalid("P", format!("must be nonnegative, got {power}")));
    }
    if n_t == 0 {
        return Err(invalid("n_t", "need at least one transmit antenna"));
    }
    let rule = GammaRule::new(n_t, n_nodes)?;
    if power == 0.0 {
        return Ok(0.0);
    }
    let c = power / n_t as f64 * sigma * sigma;
    Ok(rule.expectation(|u| (c * u).ln_1p()) / std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_moments() {
        // E[U^k] = n (n+1) ... (n+k-1)
        for shape in [1usize, 2, 5, 32] {
            let rule = GammaRule::new(shape, 64).unwrap();
            let n = shape as f64;
            assert!((rule.expectation(|_| 1.0) - 1.0).abs() < 1e-12);
            assert!((rule.expectation(|u| u) - n).abs() < 1e-10 * n);
            assert!((rule.expectation(|u| u * u) - n * (n + 1.0)).abs() < 1e-10 * n * n);
        }
    }

    #[test]
    fn log_moment_is_digamma() {
        // E[ln U] = psi(1) = -gamma for U ~ Exp(1)
        let rule = GammaRule::new(1, 64).unwrap();
        let euler = 0.577_215_664_901_532_9;
        assert!((rule.expectation(f64::ln) + euler).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ergodic_log_rate_quadrature(1.0, -1.0, 1, 64).is_err());
        assert!(ergodic_log_rate_quadrature(1.0, 1.0, 0, 64).is_err());
        assert!(ergodic_log_rate_quadrature(1.0, 1.0, 1, 4).is_err());
        assert!(ergodic_log_rate_quadrature(0.0, 1.0, 1, 64).is_err());
    }

    #[test]
    fn zero_power_is_zero() {
        assert_eq!(ergodic_log_rate_quadrature(1.0, 0.0, 3, 64).unwrap(), 0.0);
    }
}
