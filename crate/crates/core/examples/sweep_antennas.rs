//! Capacity against the number of transmit antennas at P = 10, converging
//! to `log2(1 + P sigma_h^2) - log2(1 + P sigma_g^2)`.

use misose::experiments::{run_sweep_antennas, SweepKind, SweepSpec};
use misose::{ChannelModel, EvalMethod};

pub fn run_example() -> misose::Result<()> {
    let spec = SweepSpec {
        kind: SweepKind::Antennas,
        model: ChannelModel::new(1, 1.0, 0.5)?,
        power: 10.0,
        grid: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0],
        method: EvalMethod::Quadrature { n_nodes: 64 },
        output_path: None,
    };
    let rows = run_sweep_antennas(&spec)?;
    println!("limit {:.5} bits", rows[0].asymptote_bits);
    for r in &rows {
        println!("n_t = {:>3}: {:.5} bits", r.n_t, r.capacity_bits);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
