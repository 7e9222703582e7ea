use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stbc_core::numerics::Interval;
use stbc_limits::error::Result;
use stbc_limits::{
    cmd_bounds, cmd_diversity, cmd_plot, cmd_simulate, render_curves, render_slopes, run_specs, CliError, Command,
    Format, Settings,
};

#[derive(Parser)]
#[command(
    name = "stbc-limits",
    version,
    about = "Sphere-packing lower bounds and SVD beamforming SER for MIMO block fading"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate lower-bound curves over an SNR grid.
    Bounds(Common),
    /// Simulate SVD beamforming SER (and any requested bounds) over an SNR grid.
    Simulate(Common),
    /// Fit diversity slopes of curves in CSV files.
    Diversity(FileArgs),
    /// Write a gnuplot script for curves in CSV files.
    Plot(FileArgs),
}

#[derive(Args)]
struct Common {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure setup: fig3 (2×1) or fig4 (2×2).
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long = "K")]
    k: Option<String>,
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long = "R")]
    r: Option<String>,
    /// SNR grid in dB: LO:STEP:HI or a comma list.
    #[arg(long)]
    snr: Option<String>,
    /// Comma list of integral, bound1, bound2, mc_oracle, sim, sim:<bpsk|qpsk|qam8>.
    #[arg(long)]
    curves: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Keep extending a simulated point until this many errors (0 = fixed trials).
    #[arg(long)]
    min_errors: Option<String>,
    /// Trial cap when extending.
    #[arg(long)]
    max_trials: Option<String>,
    /// Directory of per-point completion files.
    #[arg(long)]
    checkpoint: Option<String>,
    #[command(flatten)]
    out: OutArgs,
    /// Suppress progress on stderr.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Worker threads (default: all cores). Does not change results.
    #[arg(long)]
    threads: Option<String>,
}

#[derive(Args)]
struct FileArgs {
    /// Curve CSV files.
    inputs: Vec<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fit window in dB, LO:HI (diversity only).
    #[arg(long)]
    window: Option<String>,
    /// Slack above M·N·K before a slope is flagged (diversity only).
    #[arg(long)]
    tolerance: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

fn layered(file: Option<&Path>, flags: &[(&str, &Option<String>)]) -> Result<Settings> {
    let base = match file {
        Some(p) => Settings::from_file(p)?,
        None => Settings::new(),
    };
    let mut over = Settings::new();
    for (key, value) in flags {
        if let Some(v) = value {
            over.set(key, v.clone())?;
        }
    }
    Ok(base.overlay(&over))
}

fn out_flags(o: &OutArgs) -> [(&'static str, &Option<String>); 3] {
    [("format", &o.format), ("out", &o.out), ("threads", &o.threads)]
}

fn emit(settings: &Settings, text: &str) -> Result<()> {
    match settings.raw("out") {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io { path: path.into(), source: e }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}

fn with_threads<T: Send>(settings: &Settings, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match settings.get::<usize>("threads")? {
        Some(0) => Err(CliError::Usage("threads must be ≥ 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?
            .install(f),
        None => f(),
    }
}

fn run_curves(c: &Common, command: Command) -> Result<()> {
    let mut flags = vec![
        ("recipe", &c.recipe),
        ("M", &c.m),
        ("N", &c.n),
        ("K", &c.k),
        ("L", &c.l),
        ("R", &c.r),
        ("snr", &c.snr),
        ("curves", &c.curves),
        ("trials", &c.trials),
        ("seed", &c.seed),
        ("min_errors", &c.min_errors),
        ("max_trials", &c.max_trials),
        ("checkpoint", &c.checkpoint),
    ];
    flags.extend(out_flags(&c.out));
    let settings = layered(c.config.as_deref(), &flags)?;
    let specs = run_specs(&settings, command)?;
    let quiet = c.quiet;
    let runs = with_threads(&settings, || {
        specs
            .iter()
            .map(|spec| {
                let curves = match command {
                    Command::Bounds => cmd_bounds(spec)?,
                    Command::Simulate => cmd_simulate(spec, &mut |line| {
                        if !quiet {
                            eprintln!("{line}");
                        }
                    })?,
                };
                Ok((spec.clone(), curves))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    emit(&settings, &render_curves(&runs, specs[0].format))
}

fn parse_window(text: &str) -> Result<Interval<f64>> {
    let bad = || CliError::Usage(format!("invalid window '{text}' (expected LO:HI in dB)"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Interval::new(lo, hi).map_err(|_| bad())
}

fn run_files(a: &FileArgs, diversity: bool) -> Result<()> {
    let mut flags = vec![("window", &a.window), ("tolerance", &a.tolerance)];
    flags.extend(out_flags(&a.out));
    let settings = layered(a.config.as_deref(), &flags)?;
    let text = if diversity {
        let window = parse_window(settings.raw("window").unwrap_or("40:60"))?;
        let tolerance = settings.get::<f64>("tolerance")?.unwrap_or(0.2);
        let format = settings.get::<Format>("format")?.unwrap_or_default();
        render_slopes(&cmd_diversity(&a.inputs, window, tolerance)?, format)
    } else {
        cmd_plot(&a.inputs)?
    };
    emit(&settings, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Sub::Bounds(c) => run_curves(c, Command::Bounds),
        Sub::Simulate(c) => run_curves(c, Command::Simulate),
        Sub::Diversity(a) => run_files(a, true),
        Sub::Plot(a) => run_files(a, false),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stbc-limits: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
