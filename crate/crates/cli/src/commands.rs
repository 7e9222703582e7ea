use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use stbc_core::bounds::{bound1, bound2, diversity_slope, integral_lowerbound, mc_oracle_lowerbound, BoundsError};
use stbc_core::channel::{point_seed, ser_sweep, ChannelError, Constellation, PointCache, SerPolicy};
use stbc_core::curve::{read_csv, write_csv};
use stbc_core::numerics::Interval;
use stbc_core::{Curve, CurveKind, CurvePoint, SystemConfig};

use crate::checkpoint::CheckpointDir;
use crate::error::{CliError, Result};
use crate::settings::{Format, RunSpec};

fn describe(cfg: &SystemConfig, snr_db: f64) -> String {
    format!("M={} N={} K={} L={} R={} at {snr_db} dB", cfg.tx, cfg.rx, cfg.blocks, cfg.block_len, cfg.rate)
}

fn bounds_error(err: BoundsError, cfg: &SystemConfig, snr_db: f64) -> CliError {
    let at = describe(cfg, snr_db);
    match err {
        BoundsError::Numerics(e) => CliError::Numeric(format!("{at}: {e}")),
        other => CliError::Usage(format!("{at}: {other}")),
    }
}

fn channel_error(err: ChannelError, cfg: &SystemConfig) -> CliError {
    let at = format!("M={} N={} K={} L={} R={}", cfg.tx, cfg.rx, cfg.blocks, cfg.block_len, cfg.rate);
    match err {
        ChannelError::Config(BoundsError::Numerics(e)) => CliError::Numeric(format!("{at}: {e}")),
        other => CliError::Usage(format!("{at}: {other}")),
    }
}

fn bound_curve(spec: &RunSpec, kind: CurveKind) -> Result<Curve> {
    let mut points = Vec::with_capacity(spec.snr_grid_db.len());
    for &snr_db in &spec.snr_grid_db {
        let cfg = spec.config.at_snr_db(snr_db);
        let res = match kind {
            CurveKind::Integral => integral_lowerbound(&cfg),
            CurveKind::Bound1 => bound1(&cfg),
            CurveKind::Bound2 => bound2(&cfg),
            CurveKind::McOracle => mc_oracle_lowerbound(&cfg, spec.trials, point_seed(spec.seed, snr_db)),
            CurveKind::Sim(_) => unreachable!("simulation curves are not bounds"),
        }
        .map_err(|e| bounds_error(e, &spec.config, snr_db))?;
        points.push(CurvePoint { snr_db, value: res.value, ci: res.mc_ci });
    }
    Curve::new(Curve::label_for(kind, &spec.config), kind, Some(spec.config), points)
        .map_err(|e| CliError::Numeric(e.to_string()))
}

/// Evaluate every requested bound curve over the grid.
pub fn cmd_bounds(spec: &RunSpec) -> Result<Vec<Curve>> {
    spec.validate()?;
    if let Some(sim) = spec.curves.iter().find(|k| k.is_simulation()) {
        return Err(CliError::Usage(format!("'{sim}' is a simulation curve; use the simulate command")));
    }
    spec.curves.iter().map(|&k| bound_curve(spec, k)).collect()
}

/// Evaluate every requested curve, simulating `sim:*` kinds.
///
/// Progress lines go to `progress`; with a checkpoint directory finished
/// points are reused on rerun.
pub fn cmd_simulate(spec: &RunSpec, progress: &mut dyn FnMut(&str)) -> Result<Vec<Curve>> {
    spec.validate()?;
    let mut curves = Vec::with_capacity(spec.curves.len());
    for &kind in &spec.curves {
        let CurveKind::Sim(name) = kind else {
            curves.push(bound_curve(spec, kind)?);
            continue;
        };
        let label = Curve::label_for(kind, &spec.config);
        let cache = spec.checkpoint.as_deref().map(|dir| CheckpointDir::open(dir, spec, kind)).transpose()?;
        let policy = SerPolicy::adaptive(spec.trials, spec.min_errors, spec.max_trials);
        let sweep = ser_sweep(
            &spec.config,
            &Constellation::new(name),
            &spec.snr_grid_db,
            policy,
            spec.seed,
            cache.as_ref().map(|c| c as &dyn PointCache),
            |p| {
                progress(&format!(
                    "{label}: {} dB  {} errors / {} trials  ser={:e}",
                    p.snr_db, p.estimate.errors, p.estimate.trials, p.estimate.ser
                ))
            },
        )
        .map_err(|e| channel_error(e, &spec.config))?;
        let points = sweep
            .iter()
            .map(|p| CurvePoint { snr_db: p.snr_db, value: p.estimate.ser, ci: Some(p.estimate.ci95) })
            .collect();
        curves.push(Curve::new(label, kind, Some(spec.config), points).map_err(|e| CliError::Numeric(e.to_string()))?);
    }
    Ok(curves)
}

#[derive(Serialize)]
struct JsonCurve<'a> {
    label: &'a str,
    kind: CurveKind,
    meta: &'a RunSpec,
    points: &'a [CurvePoint],
}

/// Encode the curves of one or more runs.
pub fn render_curves(runs: &[(RunSpec, Vec<Curve>)], format: Format) -> String {
    match format {
        Format::Csv => {
            let all: Vec<Curve> = runs.iter().flat_map(|(_, c)| c.iter().cloned()).collect();
            write_csv(&all)
        }
        Format::Json => {
            let objs: Vec<JsonCurve> = runs
                .iter()
                .flat_map(|(spec, curves)| {
                    curves.iter().map(move |c| JsonCurve {
                        label: &c.label,
                        kind: c.kind,
                        meta: spec,
                        points: &c.points,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&objs).expect("curves serialize");
            s.push('\n');
            s
        }
    }
}

fn read_curves(path: &Path) -> Result<Vec<Curve>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    read_csv(&text).map_err(|e| CliError::Parse { path: path.to_path_buf(), detail: e.to_string() })
}

/// Fitted slope of one curve against its diversity ceiling M·N·K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub label: String,
    pub slope: f64,
    pub points: usize,
    pub ceiling: Option<u32>,
    pub violation: bool,
}

/// Fit −log10(value) against SNR/10 inside `window` for every curve in the
/// input files. Zero-valued points (no observed errors) are skipped. A curve
/// violates the ceiling when its slope exceeds M·N·K + `tolerance`.
pub fn cmd_diversity(inputs: &[PathBuf], window: Interval<f64>, tolerance: f64) -> Result<Vec<SlopeReport>> {
    if inputs.is_empty() {
        return Err(CliError::Usage("diversity needs at least one curve file".into()));
    }
    let mut out = Vec::new();
    for path in inputs {
        for curve in read_curves(path)? {
            let kept: Vec<CurvePoint> =
                curve.points.iter().copied().filter(|p| p.value > 0.0 && window.contains(p.snr_db)).collect();
            let points = kept.len();
            let trimmed = Curve { points: kept, ..curve.clone() };
            let slope = diversity_slope(&trimmed, window)
                .map_err(|e| CliError::Usage(format!("{}: curve '{}': {e}", path.display(), curve.label)))?;
            let ceiling = curve.resolved_config().map(|c| c.channel_dims());
            let violation = ceiling.is_some_and(|d| slope > f64::from(d) + tolerance);
            out.push(SlopeReport { label: curve.label, slope, points, ceiling, violation });
        }
    }
    Ok(out)
}

pub fn render_slopes(reports: &[SlopeReport], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("label,slope,points,ceiling,violation\n");
            for r in reports {
                let ceiling = r.ceiling.map(|d| d.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{:.6},{},{},{}", r.label, r.slope, r.points, ceiling, r.violation);
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A gnuplot script drawing every curve in `inputs` on a log-y SER axis.
/// The script reads the CSV files directly; nothing is executed here.
pub fn cmd_plot(inputs: &[PathBuf]) -> Result<String> {
    if inputs.is_empty() {
        return Err(CliError::Usage("plot needs at least one curve file".into()));
    }
    let mut entries = Vec::new();
    for path in inputs {
        for curve in read_curves(path)? {
            let style = if curve.kind.is_simulation() { "linespoints pt 7" } else { "lines" };
            entries.push(format!(
                "  {} skip 1 using 1:(strcol(5) eq {} ? $2 : 1/0) with {style} title {}",
                quoted(&path.display().to_string()),
                quoted(&curve.label),
                quoted(&curve.label)
            ));
        }
    }
    if entries.is_empty() {
        return Err(CliError::Usage("input files contain no curves".into()));
    }
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set logscale y\n");
    s.push_str("set format y \"10^{%L}\"\n");
    s.push_str("set xlabel \"SNR (dB)\"\n");
    s.push_str("set ylabel \"error probability\"\n");
    s.push_str("set grid\n");
    s.push_str("set key bottom left\n");
    s.push_str("plot \\\n");
    s.push_str(&entries.join(", \\\n"));
    s.push('\n');
    Ok(s)
}
