//! Projected stochastic gradient ascent over the power simplex, started from
//! random points, ends at the uniform allocation.

use misose::{optimize_allocation, ChannelModel, OptimizerConfig};

pub fn run_example() -> misose::Result<()> {
    let model = ChannelModel::new(4, 1.0, 0.5)?;
    let budget = 4.0;
    for seed in 0..3 {
        let cfg = OptimizerConfig {
            seed,
            ..Default::default()
        };
        let trace = optimize_allocation(&model, budget, &cfg)?;
        let start = &trace.iterates[0];
        let end = trace.final_allocation();
        println!(
            "seed {seed}: {:.3?} -> {:.3?} after {} iterations (converged: {}, max deviation {:.4})",
            start.d(),
            end.d(),
            trace.iterates.len() - 1,
            trace.converged,
            trace.max_deviation_from_uniform()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
