use std::ffi::OsString;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use misose::experiments::{self, config, SweepKind, SweepSpec, VerifySizes};
use misose::{
    asymptote_high_snr, asymptote_large_nt, optimize_allocation, secrecy_capacity, ChannelModel, Error, EvalMethod,
    MethodTag, OptimizerConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "misose",
    version,
    about = "Ergodic secrecy capacity of MISO Rayleigh wiretap channels"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Secrecy capacity at one operating point.
    Capacity(Common),
    /// Numerically optimize the power allocation.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 400)]
        max_iters: usize,
        #[arg(long, default_value_t = 100_000)]
        grad_samples: usize,
    },
    /// Run the ordering and optimality verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Extra `d_star:d` pair to probe, e.g. `1,1:2,0`.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 3)]
        starts: usize,
    },
    /// Capacity against SNR.
    SweepSnr(Common),
    /// Capacity against the number of transmit antennas.
    SweepNt {
        #[command(flatten)]
        common: Common,
        /// Comma-separated antenna counts.
        #[arg(long, default_value = "1,2,4,8,16,32,64,128")]
        nt_grid: String,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// key=value file with defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    ntx: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma_h: f64,
    #[arg(long, default_value_t = 0.5)]
    sigma_g: f64,
    /// Transmit SNR in dB (P = 10^(snr/10)).
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    snr_db: f64,
    /// Comma-separated SNR grid in dB for sweep-snr.
    #[arg(long, default_value = "0,10,20,30,40,50,60", allow_hyphen_values = true)]
    snr_grid: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = misose::rate::DEFAULT_NODES)]
    nodes: usize,
    /// direct | coupled | quad
    #[arg(long, default_value = "coupled")]
    method: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn model(&self) -> Result<ChannelModel, Error> {
        ChannelModel::new(self.ntx, self.sigma_h, self.sigma_g)
    }

    fn power(&self) -> f64 {
        experiments::snr_db_to_power(self.snr_db)
    }

    fn method(&self) -> Result<EvalMethod, Error> {
        let tag: MethodTag = self.method.parse()?;
        Ok(EvalMethod::from_tag(tag, self.samples, self.nodes, self.seed))
    }
}

fn parse_list(name: &'static str, text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                name,
                reason: format!("cannot parse `{t}` as a number"),
            })
        })
        .collect()
}

/// Re-parses with the config file's settings inserted ahead of the explicit
/// flags, so that flags override the file.
fn parse_with_config() -> anyhow::Result<Cli> {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let first = Cli::parse_from(&raw);
    let config_path = match &first.command {
        Command::Capacity(c) | Command::SweepSnr(c) => c.config.clone(),
        Command::Optimize { common, .. } | Command::Verify { common, .. } | Command::SweepNt { common, .. } => {
            common.config.clone()
        }
    };
    let Some(path) = config_path else {
        return Ok(first);
    };
    let settings = config::read_config(&path)?;
    let mut argv: Vec<OsString> = raw[..2].to_vec();
    argv.extend(config::to_args(&settings).into_iter().map(OsString::from));
    argv.extend(raw[2..].iter().cloned());
    Ok(Cli::parse_from(argv))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Capacity(c) => {
            let model = c.model()?;
            let power = c.power();
            let est = secrecy_capacity(&model, power, c.method()?)?;
            println!(
                "n_t={} sigma_h={} sigma_g={} P={power}",
                model.n_t(),
                model.sigma_h(),
                model.sigma_g()
            );
            println!(
                "method={} capacity_bits={} std_error_bits={}",
                c.method, est.mean, est.std_error
            );
            println!("high_snr_asymptote_bits={}", asymptote_high_snr(&model));
            println!("large_nt_asymptote_bits={}", asymptote_large_nt(&model, power));
            Ok(0)
        }
        Command::Optimize {
            common,
            max_iters,
            grad_samples,
        } => {
            let model = common.model()?;
            let cfg = OptimizerConfig {
                max_iters,
                grad_samples,
                seed: common.seed,
                ..Default::default()
            };
            match optimize_allocation(&model, common.power(), &cfg) {
                Err(Error::DegenerateRegime { a }) => {
                    println!("degenerate regime (a = {a}): capacity_bits=0");
                    Ok(0)
                }
                Err(e) => Err(e.into()),
                Ok(trace) => {
                    let last = trace.final_allocation();
                    println!("iterations={} converged={}", trace.iterates.len() - 1, trace.converged);
                    println!("allocation={:?}", last.d());
                    println!("max_deviation_from_uniform={}", trace.max_deviation_from_uniform());
                    if let Some(obj) = trace.objective_values.last() {
                        println!("objective_bits={} std_error_bits={}", obj.mean, obj.std_error);
                    }
                    Ok(0)
                }
            }
        }
        Command::Verify {
            common,
            pair,
            pairs,
            starts,
        } => {
            let extra_pair = match pair {
                None => None,
                Some(p) => {
                    let (l, r) = p.split_once(':').ok_or_else(|| Error::InvalidParameter {
                        name: "pair",
                        reason: "expected `d_star:d`".into(),
                    })?;
                    Some((parse_list("pair", l)?, parse_list("pair", r)?))
                }
            };
            let sizes = VerifySizes {
                pairs,
                optimizer_starts: starts,
                extra_pair,
                ..Default::default()
            };
            let outcome = experiments::run_verify_suite(common.seed, &sizes);
            match &outcome {
                Ok(summary) => {
                    for r in &summary.reports {
                        let status = if r.holds(experiments::verify::MARGIN_SLACK) {
                            "PASS"
                        } else {
                            "FAIL"
                        };
                        println!(
                            "{status} {:<18} min_margin={:e} probes={} [{}]",
                            r.relation.to_string(),
                            r.min_margin,
                            r.n_probes,
                            r.grid
                        );
                    }
                    let opt = &summary.optimizer;
                    let status = if opt.passed() { "PASS" } else { "FAIL" };
                    println!(
                        "{status} optimizer          worst_deviation={} tolerance={}",
                        opt.worst(),
                        opt.tolerance
                    );
                    if let Some(w) = summary.worst_report().and_then(|r| r.worst()) {
                        println!("worst witness: {} at {:?} -> {:e}", w.label, w.point, w.value);
                    }
                }
                Err(e) => eprintln!("error: {e}"),
            }
            Ok(experiments::verify_exit_code(&outcome))
        }
        Command::SweepSnr(c) => {
            let spec = SweepSpec {
                kind: SweepKind::Snr,
                model: c.model()?,
                power: c.power(),
                grid: parse_list("snr-grid", &c.snr_grid)?,
                method: c.method()?,
                output_path: c.out.clone(),
            };
            let rows = experiments::run_sweep_snr(&spec)?;
            if c.out.is_none() {
                experiments::write_csv(io::stdout().lock(), &rows).context("writing CSV to stdout")?;
            }
            Ok(0)
        }
        Command::SweepNt { common, nt_grid } => {
            let spec = SweepSpec {
                kind: SweepKind::Antennas,
                model: common.model()?,
                power: common.power(),
                grid: parse_list("nt-grid", &nt_grid)?,
                method: common.method()?,
                output_path: common.out.clone(),
            };
            let rows = experiments::run_sweep_antennas(&spec)?;
            if common.out.is_none() {
                experiments::write_csv(io::stdout().lock(), &rows).context("writing CSV to stdout")?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let outcome = parse_with_config().and_then(run);
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(1, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
