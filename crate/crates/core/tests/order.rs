use approx::assert_relative_eq;
use misose::channel::Side;
use misose::order::{
    cm_fd_sweep, complete_monotone_sweep, lt_order_gap_with, lt_order_sweep, majorization_margin, majorization_sweep,
    random_majorization_pair, schur_log_sum, schur_sweep, CmGrid, MgfConvention, PairSweep, FD_REL_STEP,
};
use misose::{
    cm_derivative, lt_order_gap, majorizes, mgf_quadratic_form, quadratic_form, sample_channel,
    verify_lemma_lt_implies_expectation, ChannelModel, Error, PowerAllocation, Relation,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn majorization_examples() {
    assert!(majorizes(&[10.0, 0.0], &[5.0, 5.0]).unwrap());
    assert!(!majorizes(&[5.0, 5.0], &[10.0, 0.0]).unwrap());
    assert!(majorizes(&[3.0, 1.0, 0.0], &[2.0, 1.0, 1.0]).unwrap());
    assert!(majorizes(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
    assert_eq!(majorization_margin(&[10.0, 0.0], &[5.0, 5.0]).unwrap(), 5.0);
    assert_eq!(majorization_margin(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 0.0);
    assert!(matches!(
        majorizes(&[1.0, 1.0], &[1.0, 2.0]),
        Err(Error::UnequalSums { .. })
    ));
    assert!(matches!(
        majorizes(&[1.0], &[0.5, 0.5]),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn incomparable_vectors() {
    let x = [0.6, 0.2, 0.2];
    let y = [0.5, 0.4, 0.1];
    assert!(!majorizes(&x, &y).unwrap());
    assert!(!majorizes(&y, &x).unwrap());
}

#[test]
fn mgf_closed_form_examples() {
    assert_relative_eq!(
        mgf_quadratic_form(&[1.0, 2.0], 1.0, 0.3).unwrap(),
        1.0 / (1.3 * 1.6),
        max_relative = 1e-15
    );
    assert_relative_eq!(
        mgf_quadratic_form_factor_two(&[1.0], 1.0, 1.0),
        1.0 / 3.0,
        max_relative = 1e-15
    );
    assert!(mgf_quadratic_form(&[1.0], 1.0, 0.0).is_err());
    assert!(mgf_quadratic_form(&[-1.0], 1.0, 1.0).is_err());
}

fn mgf_quadratic_form_factor_two(d: &[f64], sigma: f64, s: f64) -> f64 {
    misose::order::mgf_quadratic_form_with(MgfConvention::FactorTwo, d, sigma, s).unwrap()
}

#[test]
fn mgf_matches_empirical_mean() {
    let n = 1_000_000;
    let m = ChannelModel::new(2, 1.0, 1.0).unwrap();
    let g = sample_channel(&m, Side::Eavesdropper, n, 12).unwrap();
    let q = quadratic_form(&g, &PowerAllocation::new(vec![1.0, 2.0], 3.0).unwrap()).unwrap();
    let s = 0.3;
    let vals: Vec<f64> = q.iter().map(|x| (-s * x).exp()).collect();
    let mean = vals.iter().sum::<f64>() / n as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let exact = mgf_quadratic_form(&[1.0, 2.0], 1.0, s).unwrap();
    assert!(
        (mean - exact).abs() < 3.0 * (var / n as f64).sqrt(),
        "{mean} vs {exact}"
    );
    // The factor-two form describes a different law.
    let other = mgf_quadratic_form_factor_two(&[1.0, 2.0], 1.0, s);
    assert!((mean - other).abs() > 100.0 * (var / n as f64).sqrt());
}

#[test]
fn lt_gap_examples() {
    // log2(1 + 5 s)^2 - log2(1 + 10 s) at s = 1.
    let gap = lt_order_gap(&[5.0, 5.0], &[10.0, 0.0], 1.0, 1.0).unwrap();
    assert_relative_eq!(gap, (36.0f64 / 11.0).log2(), max_relative = 1e-14);
    assert_eq!(lt_order_gap(&[2.0, 1.0], &[1.0, 2.0], 1.0, 0.7).unwrap(), 0.0);
    assert!(lt_order_gap(&[1.0, 1.0], &[2.0, 1.0], 1.0, 1.0).is_err());
    let f2 = lt_order_gap_with(MgfConvention::FactorTwo, &[5.0, 5.0], &[10.0, 0.0], 1.0, 0.5).unwrap();
    assert_relative_eq!(f2, gap, max_relative = 1e-14);
}

#[test]
fn schur_log_sum_examples() {
    assert_relative_eq!(schur_log_sum(&[1.0, 3.0], 1.0), 3.0, epsilon = 1e-15);
    assert!(schur_log_sum(&[2.0, 2.0], 1.0) > schur_log_sum(&[4.0, 0.0], 1.0));
}

#[test]
fn cm_derivative_examples() {
    // psi(x) = 1/(a+x) - 1/(1+x).
    assert_relative_eq!(
        cm_derivative(0.5, 1.0, 0).unwrap(),
        1.0 / 1.5 - 0.5,
        max_relative = 1e-14
    );
    // psi'(x) = -1/(a+x)^2 + 1/(1+x)^2.
    assert_relative_eq!(
        cm_derivative(0.5, 1.0, 1).unwrap(),
        -1.0 / 2.25 + 0.25,
        max_relative = 1e-14
    );
    // psi''(x) = 2/(a+x)^3 - 2/(1+x)^3 at a = 0.
    assert_relative_eq!(
        cm_derivative(0.0, 2.0, 2).unwrap(),
        2.0 / 8.0 - 2.0 / 27.0,
        max_relative = 1e-14
    );
    assert!(cm_derivative(1.0, 1.0, 0).is_err());
    assert!(cm_derivative(0.5, 0.0, 0).is_err());
    assert!(cm_derivative(0.5, 1.0, 21).is_err());
}

#[test]
fn cm_derivative_matches_finite_difference() {
    for a in [0.0, 0.3, 0.9] {
        for x in [0.01, 0.5, 3.0, 100.0] {
            for n in 0..6 {
                let h = FD_REL_STEP * x;
                let fd = (cm_derivative(a, x + h, n).unwrap() - cm_derivative(a, x - h, n).unwrap()) / (2.0 * h);
                let exact = cm_derivative(a, x, n + 1).unwrap();
                assert_relative_eq!(fd, exact, max_relative = 1e-6);
            }
        }
    }
}

#[test]
fn cm_sign_pattern_holds_on_wide_grid() {
    for a in [0.0, 0.01, 0.5, 0.999] {
        for x in [1e-6, 1e-2, 1.0, 1e2, 1e6] {
            for n in 0..=20 {
                let v = cm_derivative(a, x, n).unwrap();
                let signed = if n % 2 == 0 { v } else { -v };
                assert!(signed > 0.0, "a={a} x={x} n={n}: {v}");
            }
        }
    }
}

#[test]
fn sweeps_pass_with_defaults() {
    let cfg = PairSweep::default();
    for report in [
        majorization_sweep(&cfg).unwrap(),
        lt_order_sweep(&cfg).unwrap(),
        schur_sweep(&cfg).unwrap(),
        complete_monotone_sweep(&CmGrid::default()).unwrap(),
        cm_fd_sweep(&CmGrid::default(), 1e-4).unwrap(),
    ] {
        assert!(report.holds(1e-12), "{} {:?}", report.relation, report.worst());
        assert!(report.n_probes > 0);
        assert!(report.witnesses.len() <= misose::order::KEPT_WITNESSES);
    }
}

#[test]
fn lemma_examples() {
    let d1 = [10.0, 0.0];
    let d2 = [5.0, 5.0];
    for a in [0.0, 0.25, 0.9] {
        let report = verify_lemma_lt_implies_expectation(&d1, &d2, 1.0, a, 200_000, 3).unwrap();
        assert!(report.holds(0.0), "a={a}: {:?}", report.worst());
        let w = report.worst().unwrap();
        assert!(w.point[2] > 0.0);
        assert_eq!(report.relation, Relation::LtOrder);
    }
    let a = 0.25;
    let r = verify_lemma_lt_implies_expectation(&d1, &d2, 1.0, a, 100_000, 3).unwrap();
    let w = r.worst().unwrap();
    for v in &w.point[..2] {
        assert!(*v < 0.0 && *v > a.log2() - 1e-12);
    }
}

#[test]
fn lemma_preconditions() {
    assert!(matches!(
        verify_lemma_lt_implies_expectation(&[5.0, 5.0], &[10.0, 0.0], 1.0, 0.5, 100, 1),
        Err(Error::NotMajorized { .. })
    ));
    assert!(verify_lemma_lt_implies_expectation(&[2.0, 0.0], &[1.0, 1.0], 1.0, 1.0, 100, 1).is_err());
    assert_eq!(
        verify_lemma_lt_implies_expectation(&[2.0, 0.0], &[1.0, 1.0], 1.0, 0.5, 0, 1),
        Err(Error::ZeroSamples)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_pairs_are_ordered(n in 2usize..9, budget in 0.1f64..100.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d_star, d) = random_majorization_pair(&mut rng, n, budget);
        prop_assert!(majorizes(&d, &d_star).unwrap());
        let uniform = vec![budget / n as f64; n];
        prop_assert!(majorizes(&d_star, &uniform).unwrap());
    }

    #[test]
    fn lt_gap_nonnegative_for_majorized(
        n in 2usize..9,
        budget in 0.1f64..100.0,
        seed in any::<u64>(),
        s_exp in -3.0f64..3.0,
        sigma in 0.1f64..3.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d_star, d) = random_majorization_pair(&mut rng, n, budget);
        let gap = lt_order_gap(&d_star, &d, sigma, 10f64.powf(s_exp)).unwrap();
        prop_assert!(gap >= -1e-12, "{gap}");
    }

    #[test]
    fn lt_gap_is_permutation_invariant(d in prop::collection::vec(0.0f64..5.0, 2..7), s in 0.01f64..10.0) {
        let mut rev = d.clone();
        rev.reverse();
        prop_assert!(lt_order_gap(&d, &rev, 1.0, s).unwrap().abs() < 1e-12);
    }
}
