//! Independent oracles shared by the integration tests. Nothing here calls
//! into the estimators it is used to check.

#![allow(dead_code)]

/// Generalized exponential integral `E_n(x) = int_1^inf e^{-x t} t^{-n} dt`
/// for `x > 0`, by series (x <= 1) or Lentz continued fraction (x > 1).
pub fn expint_n(n: u32, x: f64) -> f64 {
    expint_n_scaled(n, x) * (-x).exp()
}

/// `e^x E_n(x)`, finite for large `x`.
pub fn expint_n_scaled(n: u32, x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    const EPS: f64 = 1e-16;
    assert!(x > 0.0);
    if n == 0 {
        return 1.0 / x;
    }
    let nm1 = n - 1;
    if x > 1.0 {
        let mut b = x + n as f64;
        let mut c = 1.0 / f64::MIN_POSITIVE;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (nm1 as f64 + i as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        h
    } else {
        let mut ans = if nm1 != 0 { 1.0 / nm1 as f64 } else { -x.ln() - EULER };
        let mut fact = 1.0;
        for i in 1..10_000u32 {
            fact *= -x / i as f64;
            let del = if i != nm1 {
                -fact / (i as f64 - nm1 as f64)
            } else {
                let psi = -EULER + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
                fact * (-x.ln() + psi)
            };
            ans += del;
            if del.abs() < ans.abs() * EPS {
                break;
            }
        }
        ans * x.exp()
    }
}

/// `E[log2(1 + c X)]`, `X ~ Gamma(n, 1)`, in closed form:
/// `e^{1/c} sum_{k=1}^{n} E_k(1/c) / ln 2`.
pub fn gamma_log_rate_closed_form(n: u32, c: f64) -> f64 {
    let x = 1.0 / c;
    let s: f64 = (1..=n).map(|k| expint_n_scaled(k, x)).sum();
    s / std::f64::consts::LN_2
}

/// Adaptive Simpson on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        eps: f64,
        whole: f64,
        m: f64,
        fm: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, eps / 2.0, left, lm, flm, depth - 1)
            + rec(f, m, fm, b, fb, eps / 2.0, right, rm, frm, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, tol, whole, m, fm, 50)
}

/// `int_0^inf e^{-x} log2(1 + c x) dx` by adaptive Simpson on a truncated
/// range, split at decades so the kink near `x ~ 1/c` is resolved.
pub fn exp_log_rate_by_integration(c: f64) -> f64 {
    let f = |x: f64| (-x).exp() * (c * x).ln_1p() / std::f64::consts::LN_2;
    let cuts = [0.0, 1e-6, 1e-4, 1e-2, 0.1, 1.0, 4.0, 10.0, 20.0, 40.0, 60.0];
    cuts.windows(2).map(|w| adaptive_simpson(&f, w[0], w[1], 1e-14)).sum()
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// KS rejection threshold at significance 0.001.
pub fn ks_critical_001(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.949 * ((n + m) / (n * m)).sqrt()
}
