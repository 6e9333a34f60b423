//! Resolved experiment settings.
//!
//! Settings are flat `key = value` strings. Defaults are overlaid by an
//! optional config file and then by command-line flags, and only afterwards
//! parsed into a typed [`SweepSpec`].

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use sublinear_core::{Alphabet, ProblemDims};

use crate::error::{config_err, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SweepSnr,
    SweepDelta,
    Transfer,
    Bounds,
    Verify,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SweepSnr => "sweep-snr",
            Self::SweepDelta => "sweep-delta",
            Self::Transfer => "transfer",
            Self::Bounds => "bounds",
            Self::Verify => "verify",
        }
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            Self::SweepSnr => &[("snr-db", "0:20:2"), ("estimators", "ml,separable,nonseparable")],
            Self::SweepDelta => &[
                ("snr-db", "40"),
                ("delta", "0.25,0.5,1,1.5,2,3,4"),
                ("estimators", "separable,switched"),
            ],
            Self::Transfer => &[
                ("snr-db", "40"),
                ("delta", "3"),
                ("estimators", "separable,nonseparable"),
                ("input-mse", "0.0001,0.0003,0.001,0.003,0.01,0.03,0.1"),
                ("runs", "10"),
            ],
            Self::Bounds => &[
                ("sigma-sq", "0.05,0.1,0.25,0.5,1,2"),
                ("alpha", "0.000001,0.1,0.25"),
                ("j", "0"),
                ("w-max", "3"),
            ],
            Self::Verify => &[],
        }
    }
}

/// Keys accepted in config files and as flags.
pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "k",
    "alphabet",
    "snr-db",
    "delta",
    "trials",
    "seed",
    "estimators",
    "iters",
    "damping",
    "switch-db",
    "search-trials",
    "runs",
    "input-mse",
    "sigma-sq",
    "alpha",
    "j",
    "w-max",
    "inject-fault",
    "out",
    "threads",
];

/// Keys that do not change results and are left out of the spec hash.
const UNHASHED: &[&str] = &["threads", "out", "config"];

const COMMON_DEFAULTS: &[(&str, &str)] = &[
    ("n", "1024"),
    ("k", "8"),
    ("alphabet", "1"),
    ("trials", "1000"),
    ("seed", "1"),
    ("iters", "30"),
    ("damping", "search"),
    ("switch-db", "6"),
    ("search-trials", "20"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    kind: Experiment,
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn defaults(kind: Experiment) -> Self {
        let values = COMMON_DEFAULTS
            .iter()
            .chain(kind.defaults())
            .map(|&(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { kind, values }
    }

    pub fn kind(&self) -> Experiment {
        self.kind
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> CliResult<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(config_err(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_string(), value.into().trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> CliResult<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected key=value, got `{raw}`", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            self.set(&key, value.trim()).map_err(|e| config_err(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: &Path) -> CliResult<()> {
        let text = fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        self.apply_config_text(&text)
    }

    /// SHA-256 over the experiment name and every result-affecting key.
    pub fn spec_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("experiment={}\n", self.kind.name()));
        for (k, v) in &self.values {
            if !UNHASHED.contains(&k.as_str()) {
                hasher.update(format!("{k}={v}\n"));
            }
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses `a,b,c` where each item is a number or an inclusive
/// `start:stop:step` range.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_f64(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(config_err(format!("bad range `{item}`: need step > 0 and stop >= start")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => return Err(config_err(format!("bad grid item `{item}`"))),
        }
    }
    if out.is_empty() {
        return Err(config_err("grid is empty"));
    }
    Ok(out)
}

fn parse_f64(s: &str) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| config_err(format!("not a number: `{s}`")))?;
    if !v.is_finite() {
        return Err(config_err(format!("not finite: `{s}`")));
    }
    Ok(v)
}

fn parse_usize(key: &str, s: &str) -> CliResult<usize> {
    s.trim().parse().map_err(|_| config_err(format!("{key}: not a non-negative integer: `{s}`")))
}

fn parse_bool(key: &str, s: &str) -> CliResult<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(format!("{key}: expected true/false, got `{s}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    Fixed(f64),
    Search,
}

/// A fully parsed experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: Experiment,
    pub dims: ProblemDims,
    pub alphabet: Alphabet,
    pub estimators: Vec<String>,
    pub snr_db: Vec<f64>,
    pub delta: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub iters: usize,
    pub damping: Damping,
    pub switch_db: f64,
    pub search_trials: usize,
    pub runs: usize,
    pub input_mse: Vec<f64>,
    pub sigma_sq: Vec<f64>,
    pub alpha: Vec<f64>,
    pub j: Vec<f64>,
    pub w_max: usize,
    pub inject_fault: bool,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub spec_hash: String,
}

impl SweepSpec {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let req = |key: &str| s.get(key).ok_or_else(|| config_err(format!("missing `{key}`")));
        let opt_grid = |key: &str| s.get(key).map(parse_grid).transpose().map(Option::unwrap_or_default);

        let n = parse_usize("n", req("n")?)?;
        let k = parse_usize("k", req("k")?)?;
        let dims = ProblemDims::new(n, k)?;
        let points = parse_grid(req("alphabet")?)?;
        let alphabet = Alphabet::new(points)?;
        let trials = parse_usize("trials", req("trials")?)?;
        if trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        let seed: u64 = req("seed")?.parse().map_err(|_| config_err("seed: expected an unsigned integer"))?;
        let damping = match req("damping")? {
            "search" => Damping::Search,
            v => {
                let theta = parse_f64(v)?;
                if !(theta > 0.0 && theta <= 1.0) {
                    return Err(config_err(format!("damping must be `search` or in (0, 1], got {theta}")));
                }
                Damping::Fixed(theta)
            }
        };
        let estimators: Vec<String> = s
            .get("estimators")
            .unwrap_or("")
            .split(',')
            .map(|e| e.trim().to_string())
            .filter(|e| !e.is_empty())
            .collect();
        let threads = s.get("threads").map(|t| parse_usize("threads", t)).transpose()?;
        if threads == Some(0) {
            return Err(config_err("threads must be at least 1"));
        }

        let spec = Self {
            kind: s.kind(),
            dims,
            alphabet,
            estimators,
            snr_db: opt_grid("snr-db")?,
            delta: opt_grid("delta")?,
            trials,
            seed,
            iters: parse_usize("iters", req("iters")?)?,
            damping,
            switch_db: parse_f64(req("switch-db")?)?,
            search_trials: parse_usize("search-trials", req("search-trials")?)?,
            runs: s.get("runs").map(|r| parse_usize("runs", r)).transpose()?.unwrap_or(0),
            input_mse: opt_grid("input-mse")?,
            sigma_sq: opt_grid("sigma-sq")?,
            alpha: opt_grid("alpha")?,
            j: opt_grid("j")?,
            w_max: s.get("w-max").map(|w| parse_usize("w-max", w)).transpose()?.unwrap_or(0),
            inject_fault: s.get("inject-fault").map(|f| parse_bool("inject-fault", f)).transpose()?.unwrap_or(false),
            out: s.get("out").map(PathBuf::from),
            threads,
            spec_hash: s.spec_hash(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> CliResult<()> {
        let allowed: &[&str] = match self.kind {
            Experiment::SweepSnr => &["ml", "separable", "nonseparable", "exact"],
            Experiment::SweepDelta => &["separable", "nonseparable", "switched"],
            Experiment::Transfer => &["separable", "nonseparable"],
            Experiment::Bounds | Experiment::Verify => &[],
        };
        if !allowed.is_empty() {
            if self.estimators.is_empty() {
                return Err(config_err("estimator list is empty"));
            }
            if let Some(bad) = self.estimators.iter().find(|e| !allowed.contains(&e.as_str())) {
                return Err(config_err(format!("unknown estimator `{bad}` for {}; expected one of {allowed:?}", self.kind.name())));
            }
        }
        let nonempty = |name: &str, g: &[f64]| {
            if g.is_empty() {
                Err(config_err(format!("{name} grid is empty")))
            } else {
                Ok(())
            }
        };
        match self.kind {
            Experiment::SweepSnr => nonempty("snr-db", &self.snr_db)?,
            Experiment::SweepDelta | Experiment::Transfer => {
                nonempty("delta", &self.delta)?;
                if self.snr_db.len() != 1 {
                    return Err(config_err(format!("{} takes a single snr-db value", self.kind.name())));
                }
                if self.iters == 0 {
                    return Err(config_err("iters must be at least 1"));
                }
                if self.damping == Damping::Search && self.search_trials == 0 {
                    return Err(config_err("search-trials must be at least 1"));
                }
                if self.delta.iter().any(|&d| !(d > 0.0)) {
                    return Err(config_err("delta values must be positive"));
                }
            }
            Experiment::Bounds => {
                nonempty("sigma-sq", &self.sigma_sq)?;
                nonempty("alpha", &self.alpha)?;
                nonempty("j", &self.j)?;
                if self.w_max == 0 {
                    return Err(config_err("w-max must be at least 1"));
                }
                if self.sigma_sq.iter().any(|&s| !(s > 0.0)) {
                    return Err(config_err("sigma-sq values must be positive"));
                }
            }
            Experiment::Verify => {}
        }
        if self.kind == Experiment::Transfer {
            nonempty("input-mse", &self.input_mse)?;
            if self.input_mse.iter().any(|&v| !(v > 0.0)) {
                return Err(config_err("input-mse values must be positive"));
            }
        }
        Ok(())
    }

    /// `σ² = 10^{−dB/10}`.
    pub fn sigma_sq_of(snr_db: f64) -> f64 {
        10f64.powf(-snr_db / 10.0)
    }
}
