//! Coupled vs direct Monte Carlo: same target, one shared draw stream, far
//! smaller standard error.

use misose::{secrecy_rate_coupled_mc, secrecy_rate_direct_mc, ChannelModel, PowerAllocation};

pub fn run_example() -> misose::Result<()> {
    let n = 100_000;
    for ratio in [0.1, 0.5, 0.9] {
        let model = ChannelModel::new(4, 1.0, ratio)?;
        let alloc = PowerAllocation::uniform(4, 10.0)?;
        let direct = secrecy_rate_direct_mc(&model, &alloc, n, 5)?;
        let coupled = secrecy_rate_coupled_mc(&model, &alloc, n, 5)?;
        println!(
            "sigma_g/sigma_h = {ratio}: direct {:.4} +- {:.1e}, coupled {:.4} +- {:.1e} (variance ratio {:.1})",
            direct.mean,
            direct.std_error,
            coupled.mean,
            coupled.std_error,
            (direct.std_error / coupled.std_error).powi(2)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    run_example()
}
