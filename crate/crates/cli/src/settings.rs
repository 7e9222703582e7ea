//! Run configuration: `key = value` files, flag overrides, SNR grids and the
//! figure recipes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use stbc_core::channel::ConstellationName;
use stbc_core::{CurveKind, SystemConfig};

use crate::error::{CliError, Result};

/// Every key understood in config files and as a flag.
pub const KEYS: &[&str] = &[
    "M",
    "N",
    "K",
    "L",
    "R",
    "snr",
    "curves",
    "trials",
    "seed",
    "min_errors",
    "max_trials",
    "format",
    "out",
    "checkpoint",
    "threads",
    "recipe",
    "window",
    "tolerance",
];

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Flat key/value settings. Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut out = Settings::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |detail: String| CliError::Parse {
                path: origin.to_path_buf(),
                detail: format!("line {}: {detail}", idx + 1),
            };
            let (key, value) =
                line.split_once('=').ok_or_else(|| parse_err(format!("expected key = value, got '{line}'")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(parse_err(format!("unknown key '{key}'")));
            }
            out.values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("unknown setting '{key}'")));
        }
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    /// `self` with every value present in `overrides` replaced.
    pub fn overlay(mut self, overrides: &Settings) -> Self {
        for (k, v) in &overrides.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("invalid {key} '{v}': {e}"))))
            .transpose()
    }
}

/// Parse `LO:STEP:HI` (inclusive), a comma list, or a single value.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |detail: &str| CliError::Usage(format!("invalid SNR grid '{text}': {detail}"));
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| bad("not a number")).and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad("not finite"))
            }
        })
    };
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, step, hi] = parts[..] else { return Err(bad("expected LO:STEP:HI")) };
        let (lo, step, hi) = (num(lo)?, num(step)?, num(hi)?);
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if hi < lo {
            return Err(bad("HI below LO"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(bad("too many points"));
        }
        // indexed rather than accumulated, rounded to drop float residue
        (0..count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(grid)
}

/// A requested curve; `sim` without a constellation follows the rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Requested {
    Kind(CurveKind),
    SimForRate,
}

fn parse_curves(text: &str) -> Result<Vec<Requested>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let req =
            if tok == "sim" { Requested::SimForRate } else { Requested::Kind(tok.parse().map_err(CliError::Usage)?) };
        if !out.contains(&req) {
            out.push(req);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no curves requested".into()));
    }
    Ok(out)
}

/// Built-in figure setups: 2×1 (fig3) and 2×2 (fig4) single-use systems at
/// R = 1, 2, 3 with all bounds and the matching SVD simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Fig3,
    Fig4,
}

impl FromStr for Recipe {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "fig3" => Ok(Recipe::Fig3),
            "fig4" => Ok(Recipe::Fig4),
            other => Err(format!("unknown recipe '{other}' (expected fig3 or fig4)")),
        }
    }
}

impl Recipe {
    fn defaults(self) -> Settings {
        let rx = match self {
            Recipe::Fig3 => "1",
            Recipe::Fig4 => "2",
        };
        let mut s = Settings::new();
        for (k, v) in
            [("M", "2"), ("N", rx), ("K", "1"), ("L", "1"), ("snr", "0:2:30"), ("curves", "integral,bound1,bound2,sim")]
        {
            s.values.insert(k.into(), v.into());
        }
        s
    }
}

/// Which command a spec is being built for; decides default curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bounds,
    Simulate,
}

/// One fully resolved run: a system (power filled in per SNR point), the
/// grid, the curves and the sampling parameters.
///
/// Serialized into the JSON meta block. Output path and worker count are
/// left out so the bytes depend only on what was computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSpec {
    pub config: SystemConfig,
    pub snr_grid_db: Vec<f64>,
    pub curves: Vec<CurveKind>,
    pub trials: u64,
    pub seed: u64,
    pub min_errors: u64,
    pub max_trials: u64,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub checkpoint: Option<PathBuf>,
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        self.config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if self.snr_grid_db.is_empty() {
            return Err(CliError::Usage("empty SNR grid".into()));
        }
        if self.curves.is_empty() {
            return Err(CliError::Usage("no curves requested".into()));
        }
        if self.curves.iter().any(CurveKind::is_randomized) && self.trials == 0 {
            return Err(CliError::Usage("trials must be ≥ 1 for simulated or Monte Carlo curves".into()));
        }
        if self.max_trials < self.trials {
            return Err(CliError::Usage(format!("max_trials {} below trials {}", self.max_trials, self.trials)));
        }
        Ok(())
    }
}

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// Resolve settings into one spec per rate (recipes sweep R = 1, 2, 3 unless
/// R is given).
pub fn run_specs(settings: &Settings, command: Command) -> Result<Vec<RunSpec>> {
    let recipe: Option<Recipe> = settings.get("recipe")?;
    let merged = match recipe {
        Some(r) => r.defaults().overlay(settings),
        None => settings.clone(),
    };
    let need = |key: &str| -> Result<&str> {
        merged.raw(key).ok_or_else(|| CliError::Usage(format!("missing required setting --{key}")))
    };
    let count = |key: &str, default: u32| -> Result<u32> { Ok(merged.get::<u32>(key)?.unwrap_or(default)) };
    let (m, n) = (merged.get::<u32>("M")?, merged.get::<u32>("N")?);
    let m = m.ok_or_else(|| CliError::Usage("missing required setting --M".into()))?;
    let n = n.ok_or_else(|| CliError::Usage("missing required setting --N".into()))?;
    let (k, l) = (count("K", 1)?, count("L", 1)?);
    let rates: Vec<f64> = match merged.get::<f64>("R")? {
        Some(r) => vec![r],
        None if recipe.is_some() => vec![1.0, 2.0, 3.0],
        None => return Err(CliError::Usage("missing required setting --R".into())),
    };
    let grid = parse_grid(need("snr")?)?;
    let requested = match merged.raw("curves") {
        Some(c) => parse_curves(c)?,
        None => match command {
            Command::Bounds => parse_curves("integral,bound1,bound2")?,
            Command::Simulate => parse_curves("sim")?,
        },
    };
    let trials = merged.get::<u64>("trials")?.unwrap_or(DEFAULT_TRIALS);
    let seed = merged.get::<u64>("seed")?.unwrap_or(DEFAULT_SEED);
    let min_errors = merged.get::<u64>("min_errors")?.unwrap_or(0);
    let max_trials = merged.get::<u64>("max_trials")?.unwrap_or(trials);
    let format = merged.get::<Format>("format")?.unwrap_or_default();
    let output = merged.raw("out").map(PathBuf::from);
    let checkpoint = merged.raw("checkpoint").map(PathBuf::from);

    let mut specs = Vec::with_capacity(rates.len());
    for rate in rates {
        let config = SystemConfig::new(m, n, k, l, rate, 1.0).map_err(|e| CliError::Usage(e.to_string()))?;
        let curves = requested
            .iter()
            .map(|r| match *r {
                Requested::Kind(kind) => Ok(kind),
                Requested::SimForRate => {
                    let bits = (rate.fract() == 0.0).then_some(rate as u32).and_then(ConstellationName::for_bits);
                    bits.map(CurveKind::Sim).ok_or_else(|| {
                        CliError::Usage(format!("no built-in constellation carries R = {rate} bits/symbol"))
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = RunSpec {
            config,
            snr_grid_db: grid.clone(),
            curves,
            trials,
            seed,
            min_errors,
            max_trials,
            format,
            output: output.clone(),
            checkpoint: checkpoint.clone(),
        };
        spec.validate()?;
        specs.push(spec);
    }
    Ok(specs)
}
