use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twp::baselines::WgssMetric;
use twp::cli::{self, AverageOptions, CompareOptions, Method, Normalization, SynthOptions};

#[derive(Parser)]
#[command(name = "twp", version, about = "Time series averaging along the time warp profile")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average every class of a label-first dataset.
    Average {
        input: PathBuf,
        /// twp, dba, psa or arithmetic.
        #[arg(long, default_value = "twp")]
        method: Method,
        /// none, z or unit.
        #[arg(long, default_value = "none")]
        norm: Normalization,
        #[arg(long, default_value_t = 0.0005)]
        thr_ratio: f64,
        #[arg(long, default_value_t = 15)]
        dba_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sakoe-Chiba band half-width.
        #[arg(long)]
        band: Option<usize>,
        /// Input has no label column.
        #[arg(long)]
        unlabelled: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// WGSS of the TWP mean relative to DBA means from several seeds.
    Compare {
        input: PathBuf,
        /// Comma-separated DBA seeds.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,9,10,11")]
        seeds: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "dtw,phase,tam")]
        metrics: Vec<WgssMetric>,
        #[arg(long, default_value = "z")]
        norm: Normalization,
        #[arg(long, default_value_t = 0.0005)]
        thr_ratio: f64,
        #[arg(long, default_value_t = 15)]
        dba_iters: usize,
        #[arg(long)]
        band: Option<usize>,
        #[arg(long)]
        unlabelled: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Generate a synthetic dataset with ground truth.
    Synth {
        /// JSON shape description; the built-in shape when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Repetitions per noise threshold.
        #[arg(long, default_value_t = 500)]
        n_rep: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn run(args: Args) -> twp::Result<String> {
    match args.command {
        Command::Average { input, method, norm, thr_ratio, dba_iters, seed, band, unlabelled, out } => {
            let opts = AverageOptions {
                norm,
                thr_ratio,
                dba_iters,
                seed,
                band,
                unlabelled,
                ..AverageOptions::new(input, method, out)
            };
            Ok(cli::cmd_average(&opts)?.summary())
        }
        Command::Compare { input, seeds, metrics, norm, thr_ratio, dba_iters, band, unlabelled, out } => {
            let opts = CompareOptions {
                seeds,
                metrics,
                norm,
                thr_ratio,
                dba_iters,
                band,
                unlabelled,
                ..CompareOptions::new(input, out)
            };
            Ok(cli::cmd_compare(&opts)?.summary())
        }
        Command::Synth { spec, n, seed, n_rep, out } => {
            let r = cli::cmd_synth(&SynthOptions { spec_file: spec, n, seed, n_rep, out })?;
            let t = &r.noise_thresholds;
            Ok(format!(
                "{} series of length {}; noise thresholds: euclidean={:.4} phase={:.4} tam={:.4}\n",
                r.n, r.spec.total_length, t.euclidean, t.phase, t.tam
            ))
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
