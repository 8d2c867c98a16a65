mod common;

use approx::assert_relative_eq;
use misose::channel::CHUNK_ROWS;
use misose::{
    quadratic_form, sample_channel, ChannelModel, ComplexGainMatrix, Error, PowerAllocation, Side, UnitaryMatrix,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn model(n_t: usize, h: f64, g: f64) -> ChannelModel {
    ChannelModel::new(n_t, h, g).unwrap()
}

#[test]
fn rejects_bad_parameters() {
    assert!(ChannelModel::new(0, 1.0, 0.5).is_err());
    assert!(ChannelModel::new(2, 0.0, 0.5).is_err());
    assert!(ChannelModel::new(2, 1.0, -0.5).is_err());
    assert!(ChannelModel::new(2, f64::NAN, 0.5).is_err());
    assert_eq!(
        sample_channel(&model(2, 1.0, 0.5), Side::Legitimate, 0, 1),
        Err(Error::ZeroSamples)
    );
}

#[test]
fn same_seed_same_draws() {
    let m = model(3, 1.0, 0.5);
    let a = sample_channel(&m, Side::Legitimate, 10_000, 42).unwrap();
    let b = sample_channel(&m, Side::Legitimate, 10_000, 42).unwrap();
    assert_eq!(a, b);
    let c = sample_channel(&m, Side::Legitimate, 10_000, 43).unwrap();
    assert_ne!(a.entries(), c.entries());
}

#[test]
fn draws_do_not_depend_on_thread_count() {
    let m = model(4, 1.0, 0.7);
    let count = 5 * CHUNK_ROWS + 17;
    let draw = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_channel(&m, Side::Eavesdropper, count, 9).unwrap())
    };
    let one = draw(1);
    assert_eq!(one, draw(3));
    assert_eq!(one, draw(8));
}

#[test]
fn unit_variance_single_antenna() {
    let n = 1_000_000;
    let h = sample_channel(&model(1, 1.0, 0.5), Side::Legitimate, n, 1).unwrap();
    let p: Vec<f64> = h.entries().iter().map(|z| z.norm_sqr()).collect();
    let mean = p.iter().sum::<f64>() / n as f64;
    // |h|^2 ~ Exp(1): variance 1.
    assert!((mean - 1.0).abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");

    let re2 = h.entries().iter().map(|z| z.re * z.re).sum::<f64>() / n as f64;
    let im2 = h.entries().iter().map(|z| z.im * z.im).sum::<f64>() / n as f64;
    // re^2 with re ~ N(0, 1/2): mean 1/2, variance 1/2.
    let tol = 3.0 * (0.5 / n as f64).sqrt();
    assert!((re2 - 0.5).abs() < tol && (im2 - 0.5).abs() < tol, "{re2} {im2}");
}

#[test]
fn eavesdropper_norm_scales_with_sigma() {
    let n = 1_000_000;
    let m = model(3, 1.0, 0.5);
    let g = sample_channel(&m, Side::Eavesdropper, n, 2).unwrap();
    assert_eq!(g.scale(), 0.5);
    let mean = g
        .iter_rows()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        / n as f64;
    // ||g||^2 is a sum of 3 Exp(0.25): mean 0.75, variance 3 * 0.25^2.
    let se = (3.0 * 0.0625 / n as f64).sqrt();
    assert!((mean - 0.75).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn sides_are_independent_streams() {
    let m = model(2, 1.0, 1.0);
    let h = sample_channel(&m, Side::Legitimate, 1000, 5).unwrap();
    let g = sample_channel(&m, Side::Eavesdropper, 1000, 5).unwrap();
    assert_ne!(h.entries(), g.entries());
}

#[test]
fn longer_runs_extend_shorter_ones() {
    let m = model(2, 1.0, 0.5);
    let short = sample_channel(&m, Side::Legitimate, CHUNK_ROWS + 3, 11).unwrap();
    let long = sample_channel(&m, Side::Legitimate, 3 * CHUNK_ROWS, 11).unwrap();
    assert_eq!(short.entries(), &long.entries()[..short.entries().len()]);
}

#[test]
fn quadratic_form_examples() {
    let z = |re, im| Complex64::new(re, im);
    let gains =
        ComplexGainMatrix::from_rows(2, 2, vec![z(1.0, 0.0), z(0.0, 2.0), z(3.0, 4.0), z(0.0, 0.0)], 1.0).unwrap();
    let q = quadratic_form(&gains, &PowerAllocation::new(vec![0.5, 0.25], 1.0).unwrap()).unwrap();
    assert_relative_eq!(q[0], 0.5 * 1.0 + 0.25 * 4.0);
    assert_relative_eq!(q[1], 0.5 * 25.0);
    assert_eq!(
        quadratic_form(&gains, &PowerAllocation::uniform(3, 1.0).unwrap()),
        Err(Error::DimensionMismatch { expected: 2, got: 3 })
    );
}

#[test]
fn quadratic_form_mean_matches_trace() {
    // E[g^H D g] = sigma^2 * sum(d).
    let n = 400_000;
    let m = model(3, 1.0, 0.8);
    let g = sample_channel(&m, Side::Eavesdropper, n, 3).unwrap();
    let d = vec![2.0, 0.5, 0.0];
    let q = quadratic_form(&g, &PowerAllocation::new(d.clone(), 2.5).unwrap()).unwrap();
    let mean = q.iter().sum::<f64>() / n as f64;
    let var: f64 = d.iter().map(|x| (x * 0.64).powi(2)).sum();
    assert!((mean - 2.5 * 0.64).abs() < 3.0 * (var / n as f64).sqrt(), "mean {mean}");
}

#[test]
fn rotation_leaves_quadratic_form_law_unchanged() {
    let n = 20_000;
    let m = model(4, 1.0, 0.6);
    let u = UnitaryMatrix::random(4, 17).unwrap();
    assert!(u.orthonormality_defect() < 1e-12);
    let alloc = PowerAllocation::new(vec![3.0, 1.0, 0.5, 0.0], 4.5).unwrap();

    let g = sample_channel(&m, Side::Eavesdropper, n, 21).unwrap();
    let rotated = quadratic_form(&g.rotated(&u).unwrap(), &alloc).unwrap();
    let fresh = quadratic_form(&sample_channel(&m, Side::Eavesdropper, n, 22).unwrap(), &alloc).unwrap();

    let d = common::ks_statistic(&rotated, &fresh);
    assert!(d < common::ks_critical_001(n, n), "KS statistic {d}");
}

#[test]
fn rotation_preserves_norms() {
    let m = model(3, 1.0, 0.5);
    let g = sample_channel(&m, Side::Legitimate, 100, 4).unwrap();
    let r = g.rotated(&UnitaryMatrix::random(3, 8).unwrap()).unwrap();
    for (a, b) in g.iter_rows().zip(r.iter_rows()) {
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        assert_relative_eq!(na, nb, max_relative = 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_form_is_nonnegative(
        n_t in 1usize..6,
        seed in any::<u64>(),
        w in prop::collection::vec(0.0f64..10.0, 6),
    ) {
        let m = model(n_t, 1.0, 0.5);
        let g = sample_channel(&m, Side::Eavesdropper, 64, seed).unwrap();
        let d = w[..n_t].to_vec();
        let total = d.iter().sum();
        let q = quadratic_form(&g, &PowerAllocation::new(d, total).unwrap()).unwrap();
        prop_assert!(q.iter().all(|&x| x >= 0.0 && x.is_finite()));
    }

    #[test]
    fn allocation_rejects_overspend(d in prop::collection::vec(0.0f64..5.0, 1..6), excess in 1e-6f64..1.0) {
        let total: f64 = d.iter().sum();
        prop_assume!(total > 0.0);
        prop_assert!(PowerAllocation::new(d.clone(), total).is_ok());
        prop_assert!(PowerAllocation::new(d, total * (1.0 - excess)).is_err());
    }
}
