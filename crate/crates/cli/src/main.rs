//! `bggl` command line: simulation, fitting, the replication-study suite,
//! the finance pipeline, QQ data, Levy paths, limit-law draws and rate probes.
//!
//! All outputs are deterministic functions of the arguments and input files;
//! exit codes: 0 success, 1 data/model error, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bggl_core::asympt::{self, Regime};
use bggl_core::dist::BgglParams;
use bggl_core::estimate::{self, PairedSample};
use bggl_core::finance::{self, QqLaw, VolSeries};
use bggl_core::montecarlo;
use bggl_core::sample::{self, RngStream};

/// Fixed default seed used whenever --seed is omitted.
const DEFAULT_SEED: u64 = 20240901;

#[derive(Parser)]
#[command(name = "bggl", version, about = "Bivariate gamma generalized Laplace toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// RNG seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
}

impl ThetaArgs {
    fn params(&self) -> bggl_core::Result<BgglParams> {
        BgglParams::new(self.alpha, self.beta, self.delta, self.mu, self.sigma)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draw n IID (x, y) pairs from BGGL(theta)
    Sample {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit all five parameters to a CSV of x,y pairs
    Fit {
        /// Input CSV with header x,y
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the eight-block replication study (5000 replications per block)
    Table1 {
        #[arg(long)]
        replications: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the returns/volatility pipeline on a date,close,vol CSV
    Finance {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        /// Aggregate daily rows to ISO weeks before fitting
        #[arg(long)]
        aggregate_daily: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// QQ dataset of a single-column CSV (header `value`) against a law
    Qq {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_enum)]
        law: LawKind,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        sigma: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample a 2-D Levy path (G(t), W(G(t))) on a uniform grid
    LevyPath {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw from the limiting law W of the scaled estimation error
    LimitLaw {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Empirical log-log slope of RMSE(delta_hat) over a grid of sample sizes
    RateSlope {
        #[command(flatten)]
        theta: ThetaArgs,
        /// Comma-separated sample sizes, e.g. 200,800,3200
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        replications: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LawKind {
    Gamma,
    Gal,
    Normal,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Regular,
    Boundary,
    Heavy,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Regular => Regime::Regular,
            RegimeArg::Boundary => Regime::Boundary,
            RegimeArg::Heavy => Regime::Heavy,
        }
    }
}

fn write_out(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn read_xy_csv(path: &PathBuf) -> bggl_core::Result<PairedSample> {
    let mut rdr = csv::ReaderBuilder::new().from_path(path).map_err(csv_err)?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() < 2 {
            return Err(bggl_core::Error::InvalidData("expected x,y columns".into()));
        }
        x.push(parse_f64(&rec[0])?);
        y.push(parse_f64(&rec[1])?);
    }
    PairedSample::new(x, y)
}

fn read_value_csv(path: &PathBuf) -> bggl_core::Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().from_path(path).map_err(csv_err)?;
    let mut v = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        v.push(parse_f64(&rec[0])?);
    }
    Ok(v)
}

fn csv_err(e: csv::Error) -> bggl_core::Error {
    bggl_core::Error::InvalidData(format!("csv: {e}"))
}

fn parse_f64(s: &str) -> bggl_core::Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| bggl_core::Error::InvalidData(format!("not a number: {s:?}")))
}

fn run(cli: Cli) -> bggl_core::Result<()> {
    match cli.command {
        Command::Sample { theta, n, output } => {
            let params = theta.params()?;
            let mut rng = RngStream::new(output.seed, 0);
            let s = sample::sample_bggl(&params, n, &mut rng)?;
            let content = match output.format {
                Format::Csv => {
                    let mut text = String::from("x,y\n");
                    for (x, y) in s.x().iter().zip(s.y()) {
                        text.push_str(&format!("{x},{y}\n"));
                    }
                    text
                }
                Format::Json => serde_json::to_string_pretty(&s).unwrap() + "\n",
            };
            write_out(&output.out, &content)?;
        }
        Command::Fit { input, output } => {
            let s = read_xy_csv(&input)?;
            let fit = estimate::fit_bggl(&s)?;
            let content = serde_json::to_string_pretty(&fit).unwrap() + "\n";
            write_out(&output.out, &content)?;
        }
        Command::Table1 { replications, output } => {
            let configs = montecarlo::table1_configs(output.seed, replications.unwrap_or(5000));
            let reports: bggl_core::Result<Vec<_>> =
                configs.iter().map(montecarlo::run_study).collect();
            let reports = reports?;
            let content = match output.format {
                Format::Json => serde_json::to_string_pretty(&reports).unwrap() + "\n",
                Format::Csv => {
                    let mut text = String::new();
                    for r in &reports {
                        text.push_str(&r.to_text());
                        text.push('\n');
                    }
                    text
                }
            };
            write_out(&output.out, &content)?;
        }
        Command::Finance { input, aggregate_daily, output } => {
            let mut series = VolSeries::from_csv_path(&input)?;
            if aggregate_daily {
                series = series.aggregate_daily()?;
            }
            let result = finance::run_pipeline(&series)?;
            let content = serde_json::to_string_pretty(&result).unwrap() + "\n";
            write_out(&output.out, &content)?;
        }
        Command::Qq { input, law, alpha, beta, delta, mu, sigma, output } => {
            let values = read_value_csv(&input)?;
            let law = match law {
                LawKind::Gamma => QqLaw::Gamma {
                    alpha: alpha.ok_or_else(|| {
                        bggl_core::Error::InvalidParams("--alpha required for gamma".into())
                    })?,
                    beta: beta.ok_or_else(|| {
                        bggl_core::Error::InvalidParams("--beta required for gamma".into())
                    })?,
                },
                LawKind::Gal => QqLaw::Gal(BgglParams::new(
                    alpha.ok_or_else(|| {
                        bggl_core::Error::InvalidParams("--alpha required for gal".into())
                    })?,
                    beta.ok_or_else(|| {
                        bggl_core::Error::InvalidParams("--beta required for gal".into())
                    })?,
                    delta,
                    mu,
                    sigma,
                )?),
                LawKind::Normal => QqLaw::StandardNormal,
            };
            let pts = finance::qq_data(&values, &law)?;
            let content = match output.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    finance::qq_to_csv(&pts, &mut buf)?;
                    String::from_utf8(buf).unwrap()
                }
                Format::Json => serde_json::to_string_pretty(&pts).unwrap() + "\n",
            };
            write_out(&output.out, &content)?;
        }
        Command::LevyPath { theta, t_max, steps, output } => {
            let params = theta.params()?;
            if steps == 0 || !(t_max > 0.0) {
                return Err(bggl_core::Error::InvalidParams(
                    "steps >= 1 and t_max > 0 required".into(),
                ));
            }
            let times: Vec<f64> = (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect();
            let mut rng = RngStream::new(output.seed, 0);
            let path = sample::sample_levy_path(&params, &times, &mut rng)?;
            let content = match output.format {
                Format::Csv => {
                    let mut text = String::from("t,g,w\n");
                    for i in 0..path.times.len() {
                        text.push_str(&format!("{},{},{}\n", path.times[i], path.g[i], path.w[i]));
                    }
                    text
                }
                Format::Json => {
                    let obj = serde_json::json!({
                        "times": path.times, "g": path.g, "w": path.w,
                    });
                    serde_json::to_string_pretty(&obj).unwrap() + "\n"
                }
            };
            write_out(&output.out, &content)?;
        }
        Command::LimitLaw { theta, regime, draws, output } => {
            let params = theta.params()?;
            let spec = asympt::limit_law(&params, regime.into())?;
            let mut rng = RngStream::new(output.seed, 0);
            let mut text = String::from("w_alpha,w_beta,w_delta,w_mu,w_upsilon\n");
            for _ in 0..draws {
                let w = asympt::sample_limit_vector(&spec, &mut rng)?;
                text.push_str(&format!("{},{},{},{},{}\n", w[0], w[1], w[2], w[3], w[4]));
            }
            let content = match output.format {
                Format::Csv => text,
                Format::Json => serde_json::to_string_pretty(&spec).unwrap() + "\n",
            };
            write_out(&output.out, &content)?;
        }
        Command::RateSlope { theta, n_grid, replications, output } => {
            let params = theta.params()?;
            let slope = asympt::rate_slope(&params, &n_grid, replications, output.seed)?;
            let content = serde_json::to_string_pretty(&serde_json::json!({
                "alpha": params.alpha(),
                "n_grid": n_grid,
                "replications": replications,
                "seed": output.seed,
                "slope": slope,
            }))
            .unwrap()
                + "\n";
            write_out(&output.out, &content)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bggl: {e}");
            ExitCode::FAILURE
        }
    }
}
