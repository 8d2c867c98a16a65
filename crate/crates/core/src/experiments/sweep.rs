use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channel::ChannelModel;
use crate::error::{invalid, Error, Result};
use crate::rate::{asymptote_high_snr, asymptote_large_nt, secrecy_capacity, EvalMethod};

/// Header of the sweep CSV, in column order.
pub const CSV_HEADER: [&str; 11] = [
    "sweep_kind",
    "sweep_value",
    "n_t",
    "sigma_h",
    "sigma_g",
    "P",
    "method",
    "capacity_bits",
    "std_error_bits",
    "asymptote_bits",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Grid of transmit SNR values in dB at fixed `n_t`.
    Snr,
    /// Grid of antenna counts at fixed power.
    Antennas,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Snr => "snr",
            SweepKind::Antennas => "antennas",
        }
    }
}

/// Noise has unit variance at both receivers, so SNR in dB maps to `P`.
pub fn snr_db_to_power(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    /// `n_t` is used by SNR sweeps and ignored by antenna sweeps.
    pub model: ChannelModel,
    /// Linear transmit power; used by antenna sweeps.
    pub power: f64,
    /// SNR in dB, or antenna counts.
    pub grid: Vec<f64>,
    pub method: EvalMethod,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(invalid("grid", "must not be empty"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(invalid("grid", "values must be finite"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid", "must be strictly increasing"));
        }
        if self.kind == SweepKind::Antennas {
            if self.grid.iter().any(|&x| x < 1.0 || x.fract() != 0.0) {
                return Err(invalid("grid", "antenna counts must be positive integers"));
            }
            if !(self.power.is_finite() && self.power >= 0.0) {
                return Err(invalid("P", format!("must be nonnegative, got {}", self.power)));
            }
        }
        Ok(())
    }
}

/// One CSV row. `seed` is `None` for quadrature rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kind: SweepKind,
    pub sweep_value: f64,
    pub n_t: usize,
    pub sigma_h: f64,
    pub sigma_g: f64,
    pub power: f64,
    pub method: &'static str,
    pub capacity_bits: f64,
    pub std_error_bits: f64,
    pub asymptote_bits: f64,
    pub seed: Option<u64>,
}

impl SweepRow {
    fn record(&self) -> [String; 11] {
        [
            self.kind.as_str().to_string(),
            self.sweep_value.to_string(),
            self.n_t.to_string(),
            self.sigma_h.to_string(),
            self.sigma_g.to_string(),
            self.power.to_string(),
            self.method.to_string(),
            self.capacity_bits.to_string(),
            self.std_error_bits.to_string(),
            self.asymptote_bits.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

fn evaluate_point(
    kind: SweepKind,
    sweep_value: f64,
    model: &ChannelModel,
    power: f64,
    method: EvalMethod,
    asymptote: f64,
) -> Result<SweepRow> {
    let est = secrecy_capacity(model, power, method)?;
    Ok(SweepRow {
        kind,
        sweep_value,
        n_t: model.n_t(),
        sigma_h: model.sigma_h(),
        sigma_g: model.sigma_g(),
        power,
        method: method.tag().as_str(),
        capacity_bits: est.mean,
        std_error_bits: est.std_error,
        asymptote_bits: asymptote,
        seed: method.seed(),
    })
}

/// Capacity against SNR. Every point reuses the spec's seed, so MC rows
/// share draws and the curve inherits the per-sample monotonicity in `P`.
pub fn run_sweep_snr(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.kind != SweepKind::Snr {
        return Err(invalid("sweep_kind", "expected an SNR sweep"));
    }
    spec.validate()?;
    let asymptote = asymptote_high_snr(&spec.model);
    let rows = spec
        .grid
        .par_iter()
        .map(|&db| {
            evaluate_point(
                SweepKind::Snr,
                db,
                &spec.model,
                snr_db_to_power(db),
                spec.method,
                asymptote,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &spec.output_path {
        write_csv_file(path, &rows)?;
    }
    Ok(rows)
}

/// Capacity against the number of transmit antennas at fixed power.
pub fn run_sweep_antennas(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.kind != SweepKind::Antennas {
        return Err(invalid("sweep_kind", "expected an antenna sweep"));
    }
    spec.validate()?;
    let asymptote = asymptote_large_nt(&spec.model, spec.power);
    let rows = spec
        .grid
        .par_iter()
        .map(|&n| {
            let model = spec.model.with_n_t(n as usize)?;
            evaluate_point(SweepKind::Antennas, n, &model, spec.power, spec.method, asymptote)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &spec.output_path {
        write_csv_file(path, &rows)?;
    }
    Ok(rows)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    match spec.kind {
        SweepKind::Snr => run_sweep_snr(spec),
        SweepKind::Antennas => run_sweep_antennas(spec),
    }
}

/// Writes the header and rows to any sink.
pub fn write_csv<W: Write>(sink: W, rows: &[SweepRow]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(file, rows).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: SweepKind, grid: Vec<f64>) -> SweepSpec {
        SweepSpec {
            kind,
            model: ChannelModel::new(2, 1.0, 0.5).unwrap(),
            power: 10.0,
            grid,
            method: EvalMethod::Quadrature { n_nodes: 64 },
            output_path: None,
        }
    }

    #[test]
    fn grid_validation() {
        assert!(spec(SweepKind::Snr, vec![]).validate().is_err());
        assert!(spec(SweepKind::Snr, vec![0.0, 0.0]).validate().is_err());
        assert!(spec(SweepKind::Snr, vec![10.0, 0.0]).validate().is_err());
        assert!(spec(SweepKind::Antennas, vec![1.0, 2.5]).validate().is_err());
        assert!(spec(SweepKind::Antennas, vec![0.0, 2.0]).validate().is_err());
        assert!(spec(SweepKind::Snr, vec![-10.0, 0.0, 10.0]).validate().is_ok());
    }

    #[test]
    fn wrong_kind_rejected() {
        assert!(run_sweep_snr(&spec(SweepKind::Antennas, vec![1.0])).is_err());
        assert!(run_sweep_antennas(&spec(SweepKind::Snr, vec![1.0])).is_err());
    }

    #[test]
    fn quadrature_rows_have_no_seed_and_no_error_bar() {
        let rows = run_sweep_snr(&spec(SweepKind::Snr, vec![0.0, 10.0])).unwrap();
        assert!(rows.iter().all(|r| r.seed.is_none() && r.std_error_bits == 0.0));
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "sweep_kind,sweep_value,n_t,sigma_h,sigma_g,P,method,capacity_bits,std_error_bits,asymptote_bits,seed\n"
        ));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn io_errors_carry_the_path() {
        let s = SweepSpec {
            output_path: Some(PathBuf::from("/nonexistent-dir/out.csv")),
            ..spec(SweepKind::Snr, vec![0.0])
        };
        match run_sweep_snr(&s) {
            Err(Error::Io { path, .. }) => assert_eq!(path, PathBuf::from("/nonexistent-dir/out.csv")),
            other => panic!("expected I/O error, got {other:?}"),
        }
    }
}
