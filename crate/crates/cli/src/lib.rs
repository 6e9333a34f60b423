//! Experiment harness for sublinear-sparsity estimation: Monte Carlo sweeps
//! over SNR and measurement ratio, denoiser transfer curves, a bounds
//! calculator and oracle verification suites. Every command writes CSV with a
//! leading manifest line.

pub mod error;
pub mod output;
pub mod report;
pub mod spec;
pub mod sweeps;
pub mod verify;

pub use error::{CliError, CliResult};
pub use output::{write_csv, Manifest, SweepRow, TransferRow};
pub use spec::{parse_grid, Damping, Experiment, Settings, SweepSpec};

use std::io::Write;

/// Runs `spec` and writes its CSV to `out`. Returns `false` when a
/// verification suite failed.
pub fn execute(spec: &SweepSpec, out: &mut dyn Write) -> CliResult<bool> {
    let manifest = Manifest::new(spec);
    match spec.kind {
        Experiment::SweepSnr => {
            let rows = sweeps::sweep_snr(spec)?;
            write_csv(out, &manifest, SweepRow::HEADER, rows.iter().map(SweepRow::to_csv))?;
        }
        Experiment::SweepDelta => {
            let rows = sweeps::sweep_delta(spec)?;
            write_csv(out, &manifest, SweepRow::HEADER, rows.iter().map(SweepRow::to_csv))?;
        }
        Experiment::Transfer => {
            let rows = sweeps::denoiser_transfer(spec)?;
            write_csv(out, &manifest, TransferRow::HEADER, rows.iter().map(TransferRow::to_csv))?;
        }
        Experiment::Bounds => {
            let rows = report::bounds_report(spec)?;
            write_csv(out, &manifest, report::BoundRow::HEADER, rows.iter().map(report::BoundRow::to_csv))?;
        }
        Experiment::Verify => {
            let suites = verify::verify(spec)?;
            let ok = suites.iter().all(|s| s.passed());
            write_csv(out, &manifest, verify::SuiteReport::HEADER, suites.iter().map(verify::SuiteReport::to_csv))?;
            return Ok(ok);
        }
    }
    Ok(true)
}

/// Runs `spec`, inside a dedicated pool when `spec.threads` is set, and
/// returns the CSV bytes with the verification status.
pub fn execute_to_bytes(spec: &SweepSpec) -> CliResult<(Vec<u8>, bool)> {
    let run = || {
        let mut buf = Vec::new();
        let ok = execute(spec, &mut buf)?;
        Ok((buf, ok))
    };
    match spec.threads {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::ThreadPool(e.to_string()))?
            .install(run),
    }
}
