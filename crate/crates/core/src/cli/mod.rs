//! The `bergman-lab` command line: named experiments writing CSV tables.
//!
//! Exit codes: 0 on success, 1 on input or unsupported-combination errors,
//! 2 when `--check` finds a tolerance failure.

mod commands;
mod config;
mod expr;
mod presets;
mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{run_command, trend_ok, CheckOutcome, Report};
pub use config::{parse_config_file, Command, ExperimentConfig, Sweep, KEYS};
pub use expr::Expr;
pub use presets::{list_presets, parse_function, parse_metric, parse_perturbation, parse_symbol};
pub use table::{Cell, Table};

use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "BERGMAN_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bergman-lab", about = "Riemannian Bergman metric experiments", version)]
struct Args {
    /// spectra, isometry, bergman, tail-defect, hilb-approx, met-norm, szego,
    /// sphere-band, sphere-cumulative, takahashi, list-presets
    command: String,
    /// circle, torus2 or sphere2
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated spectral levels
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated μ² cutoffs
    #[arg(long)]
    mu2: Option<String>,
    #[arg(long)]
    grid_res: Option<String>,
    #[arg(long)]
    fiber_res: Option<String>,
    #[arg(long)]
    t_res: Option<String>,
    /// Metric preset (see list-presets)
    #[arg(long)]
    metric: Option<String>,
    /// Perturbation preset
    #[arg(long)]
    gdot: Option<String>,
    /// Symbol preset; '*' joins factors for szego
    #[arg(long)]
    symbol: Option<String>,
    /// Test function preset
    #[arg(long)]
    function: Option<String>,
    /// Band offset for sphere-band
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// left or weyl
    #[arg(long)]
    quantization: Option<String>,
    /// CSV path (stdout if absent)
    #[arg(long)]
    output: Option<String>,
    /// Worker threads (overrides BERGMAN_LAB_THREADS)
    #[arg(long)]
    threads: Option<String>,
    /// Exit 2 when the command's tolerance check fails
    #[arg(long)]
    check: bool,
    /// Tolerance override for --check
    #[arg(long)]
    tol: Option<String>,
    /// key = value settings file; flags take precedence
    #[arg(long)]
    config: Option<String>,
}

impl Args {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("model", &self.model),
            ("n", &self.n),
            ("mu2", &self.mu2),
            ("grid-res", &self.grid_res),
            ("fiber-res", &self.fiber_res),
            ("t-res", &self.t_res),
            ("metric", &self.metric),
            ("gdot", &self.gdot),
            ("symbol", &self.symbol),
            ("function", &self.function),
            ("k", &self.k),
            ("quantization", &self.quantization),
            ("output", &self.output),
            ("threads", &self.threads),
            ("tol", &self.tol),
        ];
        let mut map: BTreeMap<String, String> =
            pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect();
        if self.check {
            map.insert("check".into(), "true".into());
        }
        map
    }
}

/// Parses arguments into a config; flags override the optional file, and
/// `--n` / `--mu2` on the command line replace either one given in the file.
pub fn config_from_args<I, T>(args: I) -> Result<ExperimentConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(args).map_err(|e| Error::Input(e.to_string()))?;
    let mut map = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {path}: {e}")))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let file_command = map.remove("command");
    let flags = args.flags();
    if flags.contains_key("n") || flags.contains_key("mu2") {
        map.remove("n");
        map.remove("mu2");
    }
    map.extend(flags);
    if let Some(c) = file_command {
        if c != args.command {
            return Err(Error::Input(format!("config file is for '{c}', command line asks for '{}'", args.command)));
        }
    }
    if map.get("threads").is_none() {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            map.insert("threads".into(), v);
        }
    }
    ExperimentConfig::from_map(args.command.parse()?, &map)
}

/// Runs `cfg` on a pool with the configured thread count.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    pool.install(|| run_command(cfg))
}

fn execute(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if cfg.command == Command::ListPresets {
        write!(out, "{}", list_presets()).map_err(io_err)?;
        return Ok(0);
    }
    let report = run(cfg)?;
    let csv = report.table.to_csv();
    match &cfg.output {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Input(format!("writing {}: {e}", path.display())))?,
        None => out.write_all(csv.as_bytes()).map_err(io_err)?,
    }
    for note in &report.notes {
        writeln!(err, "{note}").map_err(io_err)?;
    }
    if cfg.check {
        let status = if report.check.passed { "PASS" } else { "FAIL" };
        writeln!(err, "check {status}: {} {}", cfg.command, report.check.detail).map_err(io_err)?;
        if !report.check.passed {
            return Ok(2);
        }
    }
    Ok(0)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Input(format!("output: {e}"))
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Err(e) = Args::try_parse_from(&args) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = write!(out, "{e}");
            return 0;
        }
    }
    let result = config_from_args(args).and_then(|cfg| execute(&cfg, out, err));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
