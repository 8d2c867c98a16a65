//! Numerical probes of the ordering argument behind uniform power allocation:
//! majorization, Schur-concavity of `sum log(1 + s x_k)`, the Laplace
//! transform (MGF) order of `g^H D g`, and complete monotonicity of the
//! derivative of `f(x) = log(a + x) - log(1 + x)`.
//!
//! Each probe produces an [`OrderCheckReport`] whose margins follow one sign
//! convention: a margin `>= 0` means the claimed relation holds at that point.

use std::f64::consts::LN_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::channel::{mix, weighted_power, GaussianStream, Side};
use crate::error::{invalid, Error, Result};
use crate::estimate::Moments;

/// Relative tolerance on the equal-sum precondition.
pub const SUM_RTOL: f64 = 1e-9;

/// Largest derivative order with an exactly representable `n!`.
pub const MAX_DERIVATIVE_ORDER: u32 = 20;

/// How many of the worst probe points a report keeps.
pub const KEPT_WITNESSES: usize = 8;

fn check_equal_sums(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let scale = sx.abs().max(sy.abs()).max(f64::MIN_POSITIVE);
    if (sx - sy).abs() > SUM_RTOL * scale {
        return Err(Error::UnequalSums { left: sx, right: sy });
    }
    Ok(())
}

fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Smallest prefix-sum gap `sum_{i<=k} x_[i] - sum_{i<=k} y_[i]` over the
/// descending rearrangements. Nonnegative iff `x` majorizes `y`.
pub fn majorization_margin(x: &[f64], y: &[f64]) -> Result<f64> {
    check_equal_sums(x, y)?;
    let (xs, ys) = (sorted_desc(x), sorted_desc(y));
    let mut px = 0.0;
    let mut py = 0.0;
    let mut worst = f64::INFINITY;
    // The full sum is equal by precondition; only proper prefixes matter.
    for (a, b) in xs.iter().zip(&ys).take(xs.len() - 1) {
        px += a;
        py += b;
        worst = worst.min(px - py);
    }
    Ok(if worst.is_finite() { worst } else { 0.0 })
}

/// Whether `x` majorizes `y` (`y ≺ x`). Prefix sums are compared with a
/// slack of `1e-12` times the total so that reflexivity survives rounding.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    let margin = majorization_margin(x, y)?;
    let scale: f64 = x.iter().map(|v| v.abs()).sum();
    Ok(margin >= -1e-12 * scale.max(f64::MIN_POSITIVE))
}

/// Constant in the linear MGF factor `1 + s * c * d_k` of `g^H D g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgfConvention {
    /// Circularly symmetric complex entries of variance `sigma^2`: `c = sigma^2`.
    ComplexCircular,
    /// The factor-two form `c = 2 sigma^2` of a real-Gaussian treatment.
    FactorTwo,
}

impl MgfConvention {
    pub fn factor(self, sigma: f64) -> f64 {
        match self {
            MgfConvention::ComplexCircular => sigma * sigma,
            MgfConvention::FactorTwo => 2.0 * sigma * sigma,
        }
    }
}

fn check_mgf_args(d: &[f64], sigma: f64, s: f64) -> Result<()> {
    if d.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(invalid("d", "entries must be nonnegative"));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("sigma", format!("must be positive, got {sigma}")));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(invalid("s", format!("must be positive, got {s}")));
    }
    Ok(())
}

pub fn mgf_quadratic_form_with(convention: MgfConvention, d: &[f64], sigma: f64, s: f64) -> Result<f64> {
    check_mgf_args(d, sigma, s)?;
    let c = convention.factor(sigma);
    let log_mgf: f64 = d.iter().map(|&dk| -(s * c * dk).ln_1p()).sum();
    Ok(log_mgf.exp())
}

/// `E[exp(-s g^H D g)] = prod_k 1 / (1 + s d_k sigma^2)` for `g ~ CN(0, sigma^2 I)`.
pub fn mgf_quadratic_form(d: &[f64], sigma: f64, s: f64) -> Result<f64> {
    mgf_quadratic_form_with(MgfConvention::ComplexCircular, d, sigma, s)
}

/// `S(x) = sum_k log2(1 + s x_k)`, Schur-concave in `x` for every `s > 0`.
pub fn schur_log_sum(x: &[f64], s: f64) -> f64 {
    x.iter().map(|&v| (s * v).ln_1p()).sum::<f64>() / LN_2
}

pub fn lt_order_gap_with(convention: MgfConvention, d_star: &[f64], d: &[f64], sigma: f64, s: f64) -> Result<f64> {
    check_equal_sums(d_star, d)?;
    check_mgf_args(d_star, sigma, s)?;
    check_mgf_args(d, sigma, s)?;
    let c = convention.factor(sigma);
    Ok(schur_log_sum(d_star, s * c) - schur_log_sum(d, s * c))
}

/// `log2(mgf(d) / mgf(d_star))`, in bits. Nonnegative whenever
/// `d_star ≺ d`, i.e. `g^H D g <=_LT g^H D* g`.
pub fn lt_order_gap(d_star: &[f64], d: &[f64], sigma: f64, s: f64) -> Result<f64> {
    lt_order_gap_with(MgfConvention::ComplexCircular, d_star, d, sigma, s)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `n`-th derivative of `psi(x) = 1/(a+x) - 1/(1+x)`:
/// `(-1)^n n! [(a+x)^{-(n+1)} - (1+x)^{-(n+1)}]`.
///
/// Evaluated as `(1+x)^{-(n+1)} expm1((n+1) ln1p((1-a)/(a+x)))` so the
/// difference of two close powers keeps full relative precision.
pub fn cm_derivative(a: f64, x: f64, n: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return Err(invalid("a", format!("must lie in [0, 1), got {a}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(invalid("x", format!("must be positive, got {x}")));
    }
    if n > MAX_DERIVATIVE_ORDER {
        return Err(invalid(
            "n",
            format!("derivative order {n} exceeds {MAX_DERIVATIVE_ORDER}"),
        ));
    }
    let k = f64::from(n + 1);
    let magnitude = factorial(n) * (-k * x.ln_1p()).exp() * (k * ((1.0 - a) / (a + x)).ln_1p()).exp_m1();
    Ok(if n.is_multiple_of(2) { magnitude } else { -magnitude })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Majorization,
    LtOrder,
    CompleteMonotone,
    SchurConcave,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Majorization => "majorization",
            Relation::LtOrder => "lt_order",
            Relation::CompleteMonotone => "complete_monotone",
            Relation::SchurConcave => "schur_concave",
        })
    }
}

/// One probe point: a label, the probed coordinates, and the margin there.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub label: String,
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheckReport {
    pub relation: Relation,
    pub grid: String,
    pub n_probes: usize,
    /// Minimum over `witnesses`; `>= 0` means the relation held everywhere.
    pub min_margin: f64,
    /// The worst probe points, most violating first.
    pub witnesses: Vec<Witness>,
}

impl OrderCheckReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.min_margin >= -slack
    }

    pub fn worst(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

/// Builds a report, keeping the `KEPT_WITNESSES` smallest margins.
#[derive(Debug)]
pub struct ReportBuilder {
    relation: Relation,
    grid: String,
    n_probes: usize,
    worst: Vec<Witness>,
}

impl ReportBuilder {
    pub fn new(relation: Relation, grid: impl Into<String>) -> Self {
        Self {
            relation,
            grid: grid.into(),
            n_probes: 0,
            worst: Vec::new(),
        }
    }

    pub fn record(&mut self, label: &str, point: &[f64], value: f64) {
        self.n_probes += 1;
        let full = self.worst.len() >= KEPT_WITNESSES;
        // NaN margins sort first so they are never dropped.
        if full && !value.is_nan() && self.worst.last().is_some_and(|w| w.value <= value) {
            return;
        }
        let pos = self
            .worst
            .partition_point(|w| w.value.is_nan() || (!value.is_nan() && w.value <= value));
        self.worst.insert(
            pos,
            Witness {
                label: label.to_string(),
                point: point.to_vec(),
                value,
            },
        );
        self.worst.truncate(KEPT_WITNESSES);
    }

    pub fn finish(self) -> OrderCheckReport {
        let min_margin = self.worst.first().map_or(f64::INFINITY, |w| {
            if w.value.is_nan() {
                f64::NEG_INFINITY
            } else {
                w.value
            }
        });
        OrderCheckReport {
            relation: self.relation,
            grid: self.grid,
            n_probes: self.n_probes,
            min_margin,
            witnesses: self.worst,
        }
    }
}

/// `n` points `10^(lo + (hi - lo) i / n)` for `i = 1..=n`: open at `10^lo`,
/// closed at `10^hi`.
pub fn log_grid(lo_exp: f64, hi_exp: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / n as f64))
        .collect()
}

/// A pair `(d_star, d)` with `d_star ≺ d` and equal sums: `d` uniform on the
/// simplex, `d_star` a random convex combination of `d` and the uniform point.
pub fn random_majorization_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, budget: f64) -> (Vec<f64>, Vec<f64>) {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    let d: Vec<f64> = e.iter().map(|x| budget * x / total).collect();
    let w: f64 = rng.random();
    let centre = budget / n as f64;
    let d_star = d.iter().map(|&x| w * x + (1.0 - w) * centre).collect();
    (d_star, d)
}

/// Sizes for the randomized majorization / LT-order / Schur sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSweep {
    pub pairs: usize,
    pub s_points: usize,
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for PairSweep {
    fn default() -> Self {
        Self {
            pairs: 1000,
            s_points: 50,
            max_dim: 8,
            seed: 0,
        }
    }
}

impl PairSweep {
    fn pairs_iter(&self) -> impl Iterator<Item = (Vec<f64>, Vec<f64>)> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(self.seed, 0x0070_6169_7273));
        (0..self.pairs).map(move |_| {
            let n = rng.random_range(2..=self.max_dim.max(2));
            let budget = 10f64.powf(rng.random_range(-1.0..2.0));
            random_majorization_pair(&mut rng, n, budget)
        })
    }
}

/// Confirms `d_star ≺ d` for every generated pair, plus the extreme pair
/// (uniform ≺ single-antenna) in every dimension.
pub fn majorization_sweep(cfg: &PairSweep) -> Result<OrderCheckReport> {
    let mut report = ReportBuilder::new(
        Relation::Majorization,
        format!("{} random pairs, n in 2..={}", cfg.pairs, cfg.max_dim),
    );
    for (d_star, d) in cfg.pairs_iter() {
        let margin = majorization_margin(&d, &d_star)?;
        let mut point = d.clone();
        point.extend_from_slice(&d_star);
        report.record("d majorizes d_star", &point, margin);
    }
    for n in 1..=cfg.max_dim {
        let uniform = vec![1.0 / n as f64; n];
        let mut extreme = vec![0.0; n];
        extreme[0] = 1.0;
        report.record(
            "single majorizes uniform",
            &[n as f64],
            majorization_margin(&extreme, &uniform)?,
        );
    }
    Ok(report.finish())
}

/// `lt_order_gap(d_star, d, 1, s) >= 0` over random pairs and a log s-grid
/// in `(1e-3, 1e3]`. Both MGF conventions are probed; the factor-two rows are
/// labelled separately.
pub fn lt_order_sweep(cfg: &PairSweep) -> Result<OrderCheckReport> {
    let s_grid = log_grid(-3.0, 3.0, cfg.s_points);
    let mut report = ReportBuilder::new(
        Relation::LtOrder,
        format!(
            "{} random pairs x {} log-spaced s in (1e-3, 1e3], sigma = 1",
            cfg.pairs, cfg.s_points
        ),
    );
    for (d_star, d) in cfg.pairs_iter() {
        for &s in &s_grid {
            let gap = lt_order_gap(&d_star, &d, 1.0, s)?;
            report.record("complex", &[s, d.len() as f64], gap);
            let alt = lt_order_gap_with(MgfConvention::FactorTwo, &d_star, &d, 1.0, s)?;
            report.record("factor-two", &[s, d.len() as f64], alt);
        }
    }
    Ok(report.finish())
}

/// `S(d_star) - S(d) >= 0` for the Schur-concave `S(x) = sum log2(1 + s x_k)`.
pub fn schur_sweep(cfg: &PairSweep) -> Result<OrderCheckReport> {
    let s_grid = log_grid(-3.0, 3.0, cfg.s_points);
    let mut report = ReportBuilder::new(
        Relation::SchurConcave,
        format!("{} random pairs x {} log-spaced s", cfg.pairs, cfg.s_points),
    );
    for (d_star, d) in cfg.pairs_iter() {
        for &s in &s_grid {
            report.record(
                "S(d_star) - S(d)",
                &[s],
                schur_log_sum(&d_star, s) - schur_log_sum(&d, s),
            );
        }
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmGrid {
    pub a_values: Vec<f64>,
    pub x_points: usize,
    pub max_order: u32,
}

impl Default for CmGrid {
    fn default() -> Self {
        Self {
            a_values: vec![0.0, 0.1, 0.5, 0.9],
            x_points: 61,
            max_order: 10,
        }
    }
}

impl CmGrid {
    fn x_grid(&self) -> Vec<f64> {
        // Open at both ends of (1e-3, 1e3).
        let n = self.x_points;
        (1..=n)
            .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / (n + 1) as f64))
            .collect()
    }
}

/// Sign pattern `(-1)^n psi^(n)(x) > 0` over the grid. The margin is the
/// signed value itself, so strict positivity shows as `min_margin > 0`.
pub fn complete_monotone_sweep(grid: &CmGrid) -> Result<OrderCheckReport> {
    let xs = grid.x_grid();
    let mut report = ReportBuilder::new(
        Relation::CompleteMonotone,
        format!(
            "a in {:?}, {} log-spaced x in (1e-3, 1e3), n in 0..={}",
            grid.a_values, grid.x_points, grid.max_order
        ),
    );
    for &a in &grid.a_values {
        for &x in &xs {
            for n in 0..=grid.max_order {
                let v = cm_derivative(a, x, n)?;
                let signed = if n % 2 == 0 { v } else { -v };
                report.record("(-1)^n psi^(n)", &[a, x, f64::from(n)], signed);
            }
        }
    }
    Ok(report.finish())
}

/// Relative step of the central difference in [`cm_fd_sweep`].
pub const FD_REL_STEP: f64 = 1e-4;

/// Central-difference consistency of consecutive derivative orders. Margin is
/// `rel_tol - |fd - exact| / |exact|`.
pub fn cm_fd_sweep(grid: &CmGrid, rel_tol: f64) -> Result<OrderCheckReport> {
    let xs = grid.x_grid();
    let mut report = ReportBuilder::new(
        Relation::CompleteMonotone,
        format!(
            "finite difference, step {FD_REL_STEP} x, a in {:?}, n in 0..{}",
            grid.a_values, grid.max_order
        ),
    );
    for &a in &grid.a_values {
        for &x in &xs {
            let h = FD_REL_STEP * x;
            for n in 0..grid.max_order {
                let fd = (cm_derivative(a, x + h, n)? - cm_derivative(a, x - h, n)?) / (2.0 * h);
                let exact = cm_derivative(a, x, n + 1)?;
                let rel = (fd - exact).abs() / exact.abs();
                report.record("fd relative error", &[a, x, f64::from(n)], rel_tol - rel);
            }
        }
    }
    Ok(report.finish())
}

/// Monte Carlo check of the Laplace-order lemma on the secrecy integrand
/// `f(x) = log2(a + x) - log2(1 + x)`: with `d2 ≺ d1`, `B_i = g^H D_i g`,
/// confirms `E[f(B1)] <= E[f(B2)]` within three standard errors.
///
/// Both expectations use the same draws of `g ~ CN(0, sigma^2 I)`. The single
/// witness is `[E f(B1), E f(B2), difference, std_error]` with margin
/// `difference + 3 std_error`.
pub fn verify_lemma_lt_implies_expectation(
    d1: &[f64],
    d2: &[f64],
    sigma: f64,
    a: f64,
    n_samples: usize,
    seed: u64,
) -> Result<OrderCheckReport> {
    if !(0.0..1.0).contains(&a) {
        return Err(invalid("a", format!("must lie in [0, 1), got {a}")));
    }
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if d1.iter().chain(d2).any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(invalid("d", "entries must be nonnegative"));
    }
    if !majorizes(d1, d2)? {
        return Err(Error::NotMajorized {
            candidate: d2.to_vec(),
            reference: d1.to_vec(),
        });
    }
    let f = |x: f64| ((a + x).ln() - x.ln_1p()) / LN_2;
    let stream = GaussianStream::new(d1.len(), sigma, Side::Eavesdropper, seed)?;
    let n_t = d1.len();
    let parts = stream.map_chunks(n_samples, |chunk| {
        let mut m1 = Moments::new();
        let mut m2 = Moments::new();
        let mut diff = Moments::new();
        for g in chunk.chunks_exact(n_t) {
            let f1 = f(weighted_power(g, d1));
            let f2 = f(weighted_power(g, d2));
            m1.push(f1);
            m2.push(f2);
            diff.push(f2 - f1);
        }
        [m1, m2, diff]
    });
    let mut acc = [Moments::new(); 3];
    for p in &parts {
        for (t, m) in acc.iter_mut().zip(p) {
            t.merge(m);
        }
    }
    let [m1, m2, diff] = acc;
    let se = diff.std_error();
    let mut report = ReportBuilder::new(
        Relation::LtOrder,
        format!("E[f(B1)] <= E[f(B2)], a = {a}, sigma = {sigma}, {n_samples} samples, seed {seed}"),
    );
    report.record(
        "E f(B2) - E f(B1) + 3 se",
        &[m1.mean(), m2.mean(), diff.mean(), se],
        diff.mean() + 3.0 * se,
    );
    Ok(report.finish())
}
