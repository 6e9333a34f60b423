//! CSV rows and the manifest line.

use std::io::{self, Write};

use crate::spec::SweepSpec;

/// First line of every CSV: `# sublinear version=… experiment=… seed=… spec_hash=…`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub version: &'static str,
    pub experiment: &'static str,
    pub seed: u64,
    pub spec_hash: String,
}

impl Manifest {
    pub fn new(spec: &SweepSpec) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            experiment: spec.kind.name(),
            seed: spec.seed,
            spec_hash: spec.spec_hash.clone(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "# sublinear version={} experiment={} seed={} spec_hash={}",
            self.version, self.experiment, self.seed, self.spec_hash
        )
    }
}

/// Shortest round-trip form, switching to scientific notation outside
/// `[1e-4, 1e15)` so tiny bounds stay readable.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_csv<I>(out: &mut dyn Write, manifest: &Manifest, header: &str, rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = String>,
{
    writeln!(out, "{}", manifest.line())?;
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()
}

/// Mean `k`-normalized square error at one sweep coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// SNR in dB or δ, depending on the sweep.
    pub coordinate: f64,
    pub estimator: String,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub mse_mean: f64,
    pub mse_stderr: f64,
    pub seed: u64,
}

impl SweepRow {
    pub const HEADER: &'static str = "coordinate,estimator,N,k,trials,mse_mean,mse_stderr,seed";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_f64(self.coordinate),
            self.estimator,
            self.n,
            self.k,
            self.trials,
            fmt_f64(self.mse_mean),
            fmt_f64(self.mse_stderr),
            self.seed
        )
    }

    /// Sorts by estimator name, then coordinate.
    pub fn sort(rows: &mut [SweepRow]) {
        rows.sort_by(|a, b| a.estimator.cmp(&b.estimator).then(a.coordinate.total_cmp(&b.coordinate)));
    }
}

/// One point of a denoiser input/output relation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRow {
    /// `bayes-<denoiser>` for standalone curves, `amp-<policy>-<r>` for AMP runs.
    pub run: String,
    /// Grid index for curves, AMP iteration for runs.
    pub iteration: usize,
    pub input_mse: f64,
    pub output_mse: f64,
}

impl TransferRow {
    pub const HEADER: &'static str = "run,iteration,input_mse,output_mse";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{}", self.run, self.iteration, fmt_f64(self.input_mse), fmt_f64(self.output_mse))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_and_format() {
        let row = |c: f64, e: &str| SweepRow {
            coordinate: c,
            estimator: e.into(),
            n: 16,
            k: 2,
            trials: 3,
            mse_mean: 0.5,
            mse_stderr: 0.1,
            seed: 7,
        };
        let mut rows = vec![row(6.0, "ml"), row(0.0, "separable"), row(0.0, "ml")];
        SweepRow::sort(&mut rows);
        let order: Vec<(f64, &str)> = rows.iter().map(|r| (r.coordinate, r.estimator.as_str())).collect();
        assert_eq!(order, vec![(0.0, "ml"), (6.0, "ml"), (0.0, "separable")]);
        assert_eq!(rows[0].to_csv(), "0,ml,16,2,3,0.5,0.1,7");
        assert_eq!(fmt_f64(1.5e-31), "1.5e-31");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(0.0), "0");
    }

    #[test]
    fn manifest_first() {
        let m = Manifest { version: "0.1.0", experiment: "bounds", seed: 3, spec_hash: "ab".into() };
        let mut buf = Vec::new();
        write_csv(&mut buf, &m, "a,b", vec!["1,2".to_string()]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# sublinear version=0.1.0 experiment=bounds seed=3 spec_hash=ab\na,b\n1,2\n"
        );
    }
}
