use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{mix, quadratic_form, sample_channel, ChannelModel, PowerAllocation, Side};
use crate::error::Result;
use crate::estimate::Moments;
use crate::optimize::{optimize_allocation, OptimizerConfig};
use crate::order::{
    cm_fd_sweep, complete_monotone_sweep, lt_order_gap, lt_order_sweep, majorization_sweep, mgf_quadratic_form,
    random_majorization_pair, schur_sweep, verify_lemma_lt_implies_expectation, CmGrid, OrderCheckReport, PairSweep,
    Relation, ReportBuilder,
};

/// Margins below `-MARGIN_SLACK` fail the suite.
pub const MARGIN_SLACK: f64 = 1e-12;

/// Relative tolerance of the finite-difference consistency probe.
pub const FD_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySizes {
    pub pairs: usize,
    pub s_points: usize,
    pub max_dim: usize,
    pub cm: CmGrid,
    /// Draws for the MGF and lemma Monte Carlo checks.
    pub mc_samples: usize,
    pub optimizer_starts: usize,
    pub optimizer: OptimizerConfig,
    /// Extra `(d_star, d)` pair probed for the LT order; must have equal sums.
    pub extra_pair: Option<(Vec<f64>, Vec<f64>)>,
}

impl Default for VerifySizes {
    fn default() -> Self {
        Self {
            pairs: 1000,
            s_points: 50,
            max_dim: 8,
            cm: CmGrid::default(),
            mc_samples: 200_000,
            optimizer_starts: 3,
            optimizer: OptimizerConfig::default(),
            extra_pair: None,
        }
    }
}

/// Outcome of the optimizer-to-uniform check (n_t = 4, sigma_h = 1,
/// sigma_g = 0.5, P = 4).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerCheck {
    pub deviations: Vec<f64>,
    pub tolerance: f64,
}

impl OptimizerCheck {
    pub fn worst(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.deviations.iter().all(|&d| d <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub reports: Vec<OrderCheckReport>,
    pub optimizer: OptimizerCheck,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.holds(MARGIN_SLACK)) && self.optimizer.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The report with the smallest margin.
    pub fn worst_report(&self) -> Option<&OrderCheckReport> {
        self.reports.iter().min_by(|a, b| a.min_margin.total_cmp(&b.min_margin))
    }
}

/// Exit code of a suite run: 0 all margins held, 1 a margin was violated,
/// 2 a precondition failed.
pub fn verify_exit_code(outcome: &Result<VerifySummary>) -> i32 {
    match outcome {
        Ok(summary) => summary.exit_code(),
        Err(e) => e.exit_code(),
    }
}

/// Standard errors allowed in the MGF Monte Carlo probe. Nine two-sided
/// probes per run, so 3 would fail a correct formula a few percent of the time.
pub const MGF_Z: f64 = 5.0;

/// Monte Carlo check of the MGF product formula: margin `MGF_Z se - |mc - exact|`.
fn mgf_mc_check(sizes: &VerifySizes, seed: u64) -> Result<OrderCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0x006d_6766));
    let mut report = ReportBuilder::new(
        Relation::LtOrder,
        format!("MGF product form vs Monte Carlo, {} draws", sizes.mc_samples),
    );
    for (i, n_t) in [1usize, 2, 4].into_iter().enumerate() {
        let (_, d) = random_majorization_pair(&mut rng, n_t, 2.0);
        let sigma = 0.5 + i as f64 * 0.5;
        let model = ChannelModel::new(n_t, sigma, sigma)?;
        let gains = sample_channel(&model, Side::Eavesdropper, sizes.mc_samples, mix(seed, i as u64))?;
        let q = quadratic_form(&gains, &PowerAllocation::new(d.clone(), 2.0)?)?;
        for s in [0.1, 1.0, 10.0] {
            let m: Moments = q.iter().map(|&x| (-s * x).exp()).collect();
            let exact = mgf_quadratic_form(&d, sigma, s)?;
            let mut point = vec![s, sigma];
            point.extend_from_slice(&d);
            report.record("mgf", &point, MGF_Z * m.std_error() - (m.mean() - exact).abs());
        }
    }
    Ok(report.finish())
}

/// Runs every ordering probe and the optimizer-to-uniform check.
pub fn run_verify_suite(seed: u64, sizes: &VerifySizes) -> Result<VerifySummary> {
    let pair_cfg = PairSweep {
        pairs: sizes.pairs,
        s_points: sizes.s_points,
        max_dim: sizes.max_dim,
        seed,
    };
    let mut reports = Vec::new();

    if let Some((d_star, d)) = &sizes.extra_pair {
        let mut b = ReportBuilder::new(Relation::LtOrder, "injected pair");
        for s in crate::order::log_grid(-3.0, 3.0, sizes.s_points) {
            b.record("injected", &[s], lt_order_gap(d_star, d, 1.0, s)?);
        }
        reports.push(b.finish());
    }

    reports.push(majorization_sweep(&pair_cfg)?);
    reports.push(lt_order_sweep(&pair_cfg)?);
    reports.push(schur_sweep(&pair_cfg)?);
    reports.push(complete_monotone_sweep(&sizes.cm)?);
    reports.push(cm_fd_sweep(&sizes.cm, FD_REL_TOL)?);
    reports.push(mgf_mc_check(sizes, seed)?);

    let power = 10.0;
    for a in [0.25, 0.0] {
        reports.push(verify_lemma_lt_implies_expectation(
            &[power, 0.0],
            &[power / 2.0, power / 2.0],
            1.0,
            a,
            sizes.mc_samples,
            seed,
        )?);
    }

    let model = ChannelModel::new(4, 1.0, 0.5)?;
    let budget = 4.0;
    let mut deviations = Vec::with_capacity(sizes.optimizer_starts);
    for run in 0..sizes.optimizer_starts {
        let cfg = OptimizerConfig {
            seed: mix(seed, 1000 + run as u64),
            ..sizes.optimizer.clone()
        };
        deviations.push(optimize_allocation(&model, budget, &cfg)?.max_deviation_from_uniform());
    }

    Ok(VerifySummary {
        reports,
        optimizer: OptimizerCheck {
            deviations,
            tolerance: 0.01 * budget,
        },
    })
}
