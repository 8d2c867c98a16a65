//! Capacity approaching `2 log2(sigma_h / sigma_g)` as the SNR grows.

use misose::experiments::snr_db_to_power;
use misose::{asymptote_high_snr, secrecy_capacity, ChannelModel, EvalMethod};

pub fn run_example() -> misose::Result<()> {
    let model = ChannelModel::new(2, 1.0, 0.5)?;
    let limit = asymptote_high_snr(&model);
    println!("limit: {limit} bits");
    for db in [0.0, 20.0, 40.0, 60.0] {
        let power = snr_db_to_power(db);
        let quad = secrecy_capacity(&model, power, EvalMethod::Quadrature { n_nodes: 64 })?;
        let mc = secrecy_capacity(
            &model,
            power,
            EvalMethod::CoupledMc {
                n_samples: 100_000,
                seed: 3,
            },
        )?;
        println!(
            "{db:>4} dB  quad {:.5}  coupled {:.5} +- {:.1e}  gap to limit {:.2e}",
            quad.mean,
            mc.mean,
            mc.std_error,
            limit - quad.mean
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
