use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tjcm::fock::DEFAULT_CUTOFF_EPS;
use tjcm::scan::{DEFAULT_STEPS, DEFAULT_T_MAX};
use tjcm::verify::{DEFAULT_MAX_DIM, DEFAULT_SEED};
use tjcm::{run_scan, run_verify, Channel, Error, ModelParams, Preset, ScanConfig, TimeSeries, VerifyOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Two two-level atoms in a single-mode cavity: time scans of inversions,
/// entropy squeezing, variances and von Neumann entropy.
#[derive(Parser, Debug)]
#[command(name = "tjcm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan an arbitrary parameter set and write the requested channels as CSV.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated channel list (default: every two-atom channel).
        #[arg(long)]
        channels: Option<String>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset (fig1..fig4) with its fixed parameters and channels.
    Preset {
        /// fig1, fig2, fig3 or fig4
        name: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = DEFAULT_CUTOFF_EPS)]
        cutoff_eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the block solution with a brute-force RK4 integration.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Take alpha, g and l from a named preset instead of the flags.
        #[arg(long)]
        preset: Option<String>,
        /// Number of random grid times to check.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Refuse oracle state dimensions above this.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Corrupt one coefficient before comparing (self-test of the checker).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Coherent amplitude of the initial field.
    #[arg(long, default_value_t = 5.0)]
    alpha: f64,
    /// Coupling ratio λ₂/λ₁.
    #[arg(long, default_value_t = 0.5)]
    g: f64,
    /// Photons exchanged per atomic flip.
    #[arg(long, default_value_t = 1)]
    l: u32,
    /// Tail mass discarded by the Fock truncation.
    #[arg(long, default_value_t = DEFAULT_CUTOFF_EPS)]
    cutoff_eps: f64,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Final scaled time λ₁t.
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    tmax: f64,
    /// Number of grid points, including T = 0 and T = tmax.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
}

impl ModelArgs {
    fn params(&self) -> tjcm::Result<ModelParams> {
        ModelParams::with_cutoff(self.alpha, self.g, self.l, self.cutoff_eps)
    }
}

fn write_series(ts: &TimeSeries, out: Option<&PathBuf>) -> tjcm::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            ts.write_csv(&mut w)?;
            w.flush()?;
        }
        None => ts.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> tjcm::Result<u8> {
    match cli.command {
        Command::Scan {
            model,
            grid,
            channels,
            out,
        } => {
            let channels = match channels {
                Some(list) => Channel::parse_list(&list)?,
                None => Channel::TWO_ATOM.to_vec(),
            };
            let mut cfg = ScanConfig::new(model.params()?, grid.tmax, grid.steps, channels)?;
            cfg.output_path = out;
            let ts = run_scan(&cfg)?;
            write_series(&ts, cfg.output_path.as_ref())?;
        }
        Command::Preset {
            name,
            grid,
            cutoff_eps,
            out,
        } => {
            let preset: Preset = name.parse()?;
            let ts = preset.run(grid.tmax, grid.steps, cutoff_eps)?;
            write_series(&ts, out.as_ref())?;
        }
        Command::Verify {
            model,
            grid,
            preset,
            samples,
            max_dim,
            seed,
            inject_fault,
        } => {
            let params = match preset {
                Some(name) => {
                    let preset: Preset = name.parse()?;
                    let (alpha, g, l) = preset.parameter_sets()[0];
                    ModelParams::with_cutoff(alpha, g, l, model.cutoff_eps)?
                }
                None => model.params()?,
            };
            let cfg = ScanConfig::new(params, grid.tmax, grid.steps, Vec::new())?;
            let opts = VerifyOptions {
                max_dim,
                seed,
                inject_fault,
            };
            let report = run_verify(&cfg, samples, &opts)?;
            println!("{report}");
            if !report.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            })
        }
    }
}
