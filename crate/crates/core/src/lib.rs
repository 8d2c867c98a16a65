//! Ergodic secrecy capacity of fast Rayleigh fading MISO wiretap channels
//! with a single-antenna legitimate receiver and eavesdropper, when the
//! transmitter knows only the channel statistics.
//!
//! With `h ~ CN(0, sigma_h^2 I)` and `g ~ CN(0, sigma_g^2 I)` over `n_t`
//! transmit antennas and power budget `P`, the capacity is zero unless
//! `sigma_h > sigma_g`, and otherwise uniform power allocation is optimal:
//!
//! ```text
//! C_s = E[log2(1 + P ||h||^2 / n_t)] - E[log2(1 + P ||g||^2 / n_t)]
//! ```
//!
//! The crate evaluates this by direct Monte Carlo, by a coupled
//! (common-draw) Monte Carlo estimator, and by Gamma-law quadrature; it also
//! searches the power simplex numerically and probes the stochastic-ordering
//! facts that make the uniform allocation optimal.
//!
//! ```
//! use misose::{secrecy_capacity, ChannelModel, EvalMethod};
//!
//! let model = ChannelModel::new(2, 1.0, 0.5).unwrap();
//! let c = secrecy_capacity(&model, 10.0, EvalMethod::Quadrature { n_nodes: 64 }).unwrap();
//! assert!(c.mean > 0.0 && c.mean < 2.0);
//! ```

pub mod channel;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod optimize;
pub mod order;
pub mod quadrature;
pub mod rate;

pub use channel::{
    quadratic_form, sample_channel, ChannelModel, ComplexGainMatrix, PowerAllocation, Side, UnitaryMatrix,
};
pub use error::{Error, Result};
pub use estimate::{Moments, RateEstimate};
pub use optimize::{
    grad_estimate, objective_value, optimize_allocation, project_to_simplex, GradientEstimate, OptimizerConfig,
    OptimizerTrace,
};
pub use order::{
    cm_derivative, lt_order_gap, majorizes, mgf_quadratic_form, verify_lemma_lt_implies_expectation, OrderCheckReport,
    Relation,
};
pub use quadrature::ergodic_log_rate_quadrature;
pub use rate::{
    asymptote_high_snr, asymptote_large_nt, ergodic_log_rate_mc, secrecy_capacity, secrecy_rate,
    secrecy_rate_coupled_mc, secrecy_rate_direct_mc, EvalMethod, MethodTag,
};
