use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sublinear_cli::{execute_to_bytes, CliResult, Experiment, Settings, SweepSpec};

#[derive(Parser)]
#[command(name = "sublinear", version, about = "Sublinear-sparsity estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Square error of AWGN estimators versus 1/σ² in dB.
    SweepSnr(Flags),
    /// Final AMP square error versus δ = M/(k ln(N/k)).
    SweepDelta(Flags),
    /// Denoiser input/output square errors, standalone and inside AMP.
    Transfer(Flags),
    /// Thresholds, reliability functions, error bounds and converse constants.
    Bounds(Flags),
    /// Run the oracle verification suites; exits non-zero on failure.
    Verify(Flags),
}

/// Every flag is optional; unset flags fall back to the config file and then
/// to the built-in defaults.
#[derive(Args, Default)]
struct Flags {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// Comma-separated non-zero amplitudes.
    #[arg(long)]
    alphabet: Option<String>,
    /// Comma list or start:stop:step.
    #[arg(long)]
    snr_db: Option<String>,
    /// Comma list or start:stop:step.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    estimators: Option<String>,
    #[arg(long)]
    iters: Option<String>,
    /// A value in (0, 1] or `search`.
    #[arg(long)]
    damping: Option<String>,
    #[arg(long)]
    switch_db: Option<String>,
    /// Instances per grid point in the damping search.
    #[arg(long)]
    search_trials: Option<String>,
    /// AMP trajectories for `transfer`.
    #[arg(long)]
    runs: Option<String>,
    /// Input variance grid for the standalone transfer curves.
    #[arg(long)]
    input_mse: Option<String>,
    /// Base noise grid for `bounds`.
    #[arg(long)]
    sigma_sq: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Gap functional values for the MSE lower bound.
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    w_max: Option<String>,
    #[arg(long, hide = true)]
    inject_fault: bool,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    threads: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let fields: [(&'static str, &Option<String>); 19] = [
            ("n", &self.n),
            ("k", &self.k),
            ("alphabet", &self.alphabet),
            ("snr-db", &self.snr_db),
            ("delta", &self.delta),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("estimators", &self.estimators),
            ("iters", &self.iters),
            ("damping", &self.damping),
            ("switch-db", &self.switch_db),
            ("search-trials", &self.search_trials),
            ("runs", &self.runs),
            ("input-mse", &self.input_mse),
            ("sigma-sq", &self.sigma_sq),
            ("alpha", &self.alpha),
            ("j", &self.j),
            ("w-max", &self.w_max),
            ("threads", &self.threads),
        ];
        let mut out: Vec<_> = fields.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if let Some(p) = &self.out {
            out.push(("out", p.display().to_string()));
        }
        if self.inject_fault {
            out.push(("inject-fault", "true".into()));
        }
        out
    }
}

fn resolve(kind: Experiment, flags: &Flags) -> CliResult<SweepSpec> {
    let mut settings = Settings::defaults(kind);
    if let Some(path) = &flags.config {
        settings.apply_config_file(path)?;
    }
    for (key, value) in flags.pairs() {
        settings.set(key, value)?;
    }
    SweepSpec::from_settings(&settings)
}

fn run(kind: Experiment, flags: &Flags) -> CliResult<bool> {
    let spec = resolve(kind, flags)?;
    let (bytes, ok) = execute_to_bytes(&spec)?;
    match &spec.out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match &cli.command {
        Command::SweepSnr(f) => (Experiment::SweepSnr, f),
        Command::SweepDelta(f) => (Experiment::SweepDelta, f),
        Command::Transfer(f) => (Experiment::Transfer, f),
        Command::Bounds(f) => (Experiment::Bounds, f),
        Command::Verify(f) => (Experiment::Verify, f),
    };
    match run(kind, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
