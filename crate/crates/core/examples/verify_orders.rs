//! Majorization, Laplace-transform order, Schur-concavity and complete
//! monotonicity probes, plus a Monte Carlo check of the resulting inequality.

use misose::experiments::{run_verify_suite, VerifySizes};
use misose::order::{cm_derivative, lt_order_gap, majorizes};

pub fn run_example() -> misose::Result<()> {
    // Uniform is majorized by every allocation with the same total.
    println!("(2,0) majorizes (1,1): {}", majorizes(&[2.0, 0.0], &[1.0, 1.0])?);
    println!(
        "LT gap at s = 1: {:.4} bits",
        lt_order_gap(&[1.0, 1.0], &[2.0, 0.0], 1.0, 1.0)?
    );
    for n in 0..4 {
        println!("psi^({n})(1) at a = 0.25: {:+.4}", cm_derivative(0.25, 1.0, n)?);
    }

    let sizes = VerifySizes {
        pairs: 200,
        mc_samples: 50_000,
        optimizer_starts: 1,
        ..Default::default()
    };
    let summary = run_verify_suite(7, &sizes)?;
    for r in &summary.reports {
        println!(
            "{:<18} min margin {:+.3e} over {} probes",
            r.relation.to_string(),
            r.min_margin,
            r.n_probes
        );
    }
    println!("optimizer worst deviation {:.4}", summary.optimizer.worst());
    println!("exit code {}", summary.exit_code());
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
