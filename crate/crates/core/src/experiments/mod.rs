//! Parameter sweeps, the verification suite, and run configuration.

pub mod config;
pub mod sweep;
pub mod verify;

pub use sweep::{
    run_sweep, run_sweep_antennas, run_sweep_snr, snr_db_to_power, write_csv, write_csv_file, SweepKind, SweepRow,
    SweepSpec, CSV_HEADER,
};
pub use verify::{run_verify_suite, verify_exit_code, OptimizerCheck, VerifySizes, VerifySummary};
