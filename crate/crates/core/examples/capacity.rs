//! Secrecy capacity at one operating point by all three evaluation routes.
//!
//! ```text
//! cargo run --release --example capacity
//! ```

use misose::{asymptote_high_snr, asymptote_large_nt, secrecy_capacity, ChannelModel, EvalMethod};

pub fn run_example() -> misose::Result<()> {
    let model = ChannelModel::new(2, 1.0, 0.5)?;
    let power = 10.0;
    let methods = [
        EvalMethod::Quadrature { n_nodes: 64 },
        EvalMethod::CoupledMc {
            n_samples: 200_000,
            seed: 1,
        },
        EvalMethod::DirectMc {
            n_samples: 200_000,
            seed: 1,
        },
    ];
    println!("n_t = 2, sigma_h = 1, sigma_g = 0.5, P = {power}");
    for method in methods {
        let c = secrecy_capacity(&model, power, method)?;
        println!(
            "  {:<8} {:.5} bits  (std error {:.2e})",
            method.tag().as_str(),
            c.mean,
            c.std_error
        );
    }
    println!("  high-SNR limit   {:.5} bits", asymptote_high_snr(&model));
    println!("  large-n_t limit  {:.5} bits", asymptote_large_nt(&model, power));

    // No secrecy when the eavesdropper's channel is at least as strong.
    let reversed = ChannelModel::new(2, 0.5, 1.0)?;
    let zero = secrecy_capacity(&reversed, power, EvalMethod::default())?;
    println!("sigma_h = 0.5, sigma_g = 1: {} bits", zero.mean);
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
