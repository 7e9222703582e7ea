//! Curves of (SNR, probability) points and their CSV form.
//!
//! CSV schema, one row per point, curves concatenated:
//! `snr_db,value,ci,kind,label` with an empty `ci` field when absent.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ConstellationName;
use crate::SystemConfig;

pub const CSV_HEADER: &str = "snr_db,value,ci,kind,label";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("curve '{label}': {detail}")]
    Invalid { label: String, detail: String },
}

/// What produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Integral,
    Bound1,
    Bound2,
    McOracle,
    Sim(ConstellationName),
}

impl CurveKind {
    pub fn is_simulation(&self) -> bool {
        matches!(self, CurveKind::Sim(_))
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, CurveKind::Sim(_) | CurveKind::McOracle)
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::Integral => f.write_str("integral"),
            CurveKind::Bound1 => f.write_str("bound1"),
            CurveKind::Bound2 => f.write_str("bound2"),
            CurveKind::McOracle => f.write_str("mc_oracle"),
            CurveKind::Sim(c) => write!(f, "sim:{c}"),
        }
    }
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "integral" => Ok(CurveKind::Integral),
            "bound1" => Ok(CurveKind::Bound1),
            "bound2" => Ok(CurveKind::Bound2),
            "mc_oracle" => Ok(CurveKind::McOracle),
            other => match other.strip_prefix("sim:") {
                Some(c) => Ok(CurveKind::Sim(c.parse()?)),
                None => Err(format!(
                    "unknown curve kind '{other}' (expected integral, bound1, bound2, mc_oracle or sim:<bpsk|qpsk|qam8>)"
                )),
            },
        }
    }
}

impl Serialize for CurveKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurveKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub value: f64,
    pub ci: Option<f64>,
}

/// A labelled sequence of points with strictly increasing SNR and values
/// in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub kind: CurveKind,
    pub config: Option<SystemConfig>,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    pub fn new(
        label: impl Into<String>,
        kind: CurveKind,
        config: Option<SystemConfig>,
        points: Vec<CurvePoint>,
    ) -> Result<Self, CurveError> {
        let curve = Self { label: label.into(), kind, config, points };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let bad = |detail: String| CurveError::Invalid { label: self.label.clone(), detail };
        if self.label.contains(',') || self.label.contains('\n') || self.label.contains('"') {
            return Err(bad("label may not contain commas, quotes or newlines".into()));
        }
        for w in self.points.windows(2) {
            if !(w[1].snr_db > w[0].snr_db) {
                return Err(bad(format!("SNR not strictly increasing at {} dB", w[1].snr_db)));
            }
        }
        if let Some(p) = self.points.iter().find(|p| !(0.0..=1.0).contains(&p.value)) {
            return Err(bad(format!("value {} at {} dB outside [0, 1]", p.value, p.snr_db)));
        }
        Ok(())
    }

    /// Canonical label `<kind> M=.. N=.. K=.. L=.. R=..`; the configuration
    /// (minus power) can be recovered from it with [`Curve::config_from_label`].
    pub fn label_for(kind: CurveKind, cfg: &SystemConfig) -> String {
        format!("{kind} M={} N={} K={} L={} R={}", cfg.tx, cfg.rx, cfg.blocks, cfg.block_len, cfg.rate)
    }

    /// Parse the `M= N= K= L= R=` fields of a canonical label. Power is set
    /// to 1.
    pub fn config_from_label(label: &str) -> Option<SystemConfig> {
        let mut fields = [None::<f64>; 5];
        for tok in label.split_whitespace() {
            let Some((key, val)) = tok.split_once('=') else { continue };
            let slot = match key {
                "M" => 0,
                "N" => 1,
                "K" => 2,
                "L" => 3,
                "R" => 4,
                _ => continue,
            };
            fields[slot] = Some(val.parse().ok()?);
        }
        let [m, n, k, l, r] = fields;
        let count = |v: Option<f64>| v.filter(|x| x.fract() == 0.0 && *x >= 1.0).map(|x| x as u32);
        SystemConfig::new(count(m)?, count(n)?, count(k)?, count(l)?, r?, 1.0).ok()
    }

    /// Configuration attached to the curve, or recovered from its label.
    pub fn resolved_config(&self) -> Option<SystemConfig> {
        self.config.or_else(|| Self::config_from_label(&self.label))
    }
}

fn fmt_f64(x: f64) -> String {
    // shortest round-trip representation, stable across runs
    format!("{x:e}")
}

/// Render curves as CSV (header + one row per point).
pub fn write_csv(curves: &[Curve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for p in &c.points {
            let ci = p.ci.map(fmt_f64).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", p.snr_db, fmt_f64(p.value), ci, c.kind, c.label);
        }
    }
    out
}

/// Parse CSV written by [`write_csv`]. Rows are grouped into curves by
/// label, in order of first appearance.
pub fn read_csv(text: &str) -> Result<Vec<Curve>, CurveError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => {
            return Err(CurveError::Parse { line: 1, detail: format!("expected header '{CSV_HEADER}', got '{h}'") })
        }
        None => return Err(CurveError::Parse { line: 1, detail: "empty input".into() }),
    }
    let mut curves: Vec<Curve> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let perr = |detail: String| CurveError::Parse { line, detail };
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 5 {
            return Err(perr(format!("expected 5 fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| s.trim().parse::<f64>().map_err(|e| perr(format!("bad {what} '{s}': {e}")));
        let snr_db = num(fields[0], "snr_db")?;
        let value = num(fields[1], "value")?;
        let ci = if fields[2].trim().is_empty() { None } else { Some(num(fields[2], "ci")?) };
        let kind: CurveKind = fields[3].parse().map_err(perr)?;
        let label = fields[4].trim().to_string();
        let point = CurvePoint { snr_db, value, ci };
        match curves.iter_mut().find(|c| c.label == label) {
            Some(c) => {
                if c.kind != kind {
                    return Err(perr(format!("kind '{kind}' conflicts with earlier '{}' for label '{label}'", c.kind)));
                }
                if let Some(last) = c.points.last() {
                    if !(snr_db > last.snr_db) {
                        return Err(perr(format!("snr_db {snr_db} not increasing for '{label}'")));
                    }
                }
                c.points.push(point);
            }
            None => {
                let config = Curve::config_from_label(&label);
                curves.push(Curve { label, kind, config, points: vec![point] });
            }
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(perr(format!("value {value} outside [0, 1]")));
        }
    }
    Ok(curves)
}
