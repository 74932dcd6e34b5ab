use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use invgauss_lab::report::{unix_now, write_outputs};
use invgauss_lab::{experiments, Experiment, ExperimentConfig, Outcome};

/// Numerical experiments for semigroups of the inverse Gaussian measure.
#[derive(Debug, Parser)]
#[command(name = "invgauss-lab", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,
    /// TOML configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: out/<experiment>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let started = unix_now();
    let mut config = match &cli.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return code(e.exit_code());
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: cannot configure threads: {e}");
            return code(3);
        }
    }
    let out = cli.out.unwrap_or_else(|| PathBuf::from("out").join(cli.experiment.id()));

    let (outcome, status, error) = match experiments::run(cli.experiment, &config) {
        Ok(o) => {
            let status = if o.passed() { 0 } else { 2 };
            (o, status, None)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (Outcome::default(), e.exit_code(), Some(e.to_string()))
        }
    };
    if let Err(e) = write_outputs(&out, cli.experiment, &config, &outcome, started, status, error) {
        eprintln!("error: {e}");
        return code(e.exit_code());
    }
    for c in outcome.failed_checks() {
        eprintln!("FAIL {}: {} vs {}", c.name, c.value, c.threshold);
    }
    if status == 0 {
        println!("{}: {} checks passed; outputs in {}", cli.experiment.id(), outcome.checks.len(), out.display());
    }
    code(status)
}
