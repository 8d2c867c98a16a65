//! Capacity against SNR for three eavesdropper-to-legitimate scale ratios,
//! written as CSV to stdout (or to the path given as the first argument).

use std::path::PathBuf;

use misose::experiments::{run_sweep_snr, write_csv, write_csv_file, SweepKind, SweepRow, SweepSpec};
use misose::{ChannelModel, EvalMethod};

fn sweep_rows() -> misose::Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for ratio in [0.1, 0.5, 0.9] {
        let spec = SweepSpec {
            kind: SweepKind::Snr,
            model: ChannelModel::new(2, 1.0, ratio)?,
            power: 0.0,
            grid: (0..=6).map(|i| 10.0 * i as f64).collect(),
            method: EvalMethod::Quadrature { n_nodes: 64 },
            output_path: None,
        };
        rows.extend(run_sweep_snr(&spec)?);
    }
    Ok(rows)
}

pub fn run_example() -> misose::Result<()> {
    let mut buf = Vec::new();
    write_csv(&mut buf, &sweep_rows()?).expect("in-memory CSV");
    print!("{}", String::from_utf8_lossy(&buf));
    Ok(())
}

#[allow(dead_code)]
fn main() -> misose::Result<()> {
    match std::env::args().nth(1).map(PathBuf::from) {
        Some(path) => write_csv_file(&path, &sweep_rows()?),
        None => run_example(),
    }
}
