//! Command-line front end: TOML configs, single runs, sweeps, figures and the protocol catalog.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dynamics::{Correction, DriveMode, IntegratorSettings, RunConfig, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::metrics::{detuning_area_of, simulate};
use crate::protocols::{Detuning, DriveParams, Family, ProtocolSpec, Pulses, DEFAULT_EPS_CUT};
use crate::sweeps::{figure_job, run_figure, run_grid, Axis, Figure, FigureJob, GridSpec, Metric};

/// Tolerance of the catalog's pi-area check.
pub const CATALOG_TOLERANCE: f64 = 1e-3;

/// Flat run configuration as read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliConfig {
    pub protocol: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub mode: DriveMode,
    #[serde(rename = "omega_T")]
    pub omega_t: f64,
    #[serde(rename = "tau_T")]
    pub tau_t: f64,
    #[serde(rename = "gamma_T")]
    pub gamma_t: f64,
    #[serde(rename = "T")]
    pub width: f64,
    /// Constant one-photon detuning `Delta_p`.
    pub delta_p: f64,
    /// When set, `Delta_p = ratio * Omega_0(t)` instead of the constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_p_ratio: Option<f64>,
    pub area_scale: f64,
    pub phase_offset: f64,
    #[serde(rename = "lock_tau_T", skip_serializing_if = "Option::is_none")]
    pub lock_tau_t: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    pub eps_cut: f64,
    pub samples: usize,
    pub out: PathBuf,
    /// Worker threads for sweeps; 0 uses every available core.
    pub workers: usize,
    pub axes: Vec<Axis>,
    pub metrics: Vec<Metric>,
}

impl Default for CliConfig {
    fn default() -> Self {
        let drive = DriveParams::default();
        let correction = Correction::default();
        let integrator = IntegratorSettings::default();
        CliConfig {
            protocol: Family::Gaussian,
            alpha: None,
            mode: DriveMode::Stirap,
            omega_t: drive.omega_t,
            tau_t: drive.tau_t,
            gamma_t: drive.gamma_t,
            width: drive.width,
            delta_p: 0.0,
            delta_p_ratio: None,
            area_scale: correction.area_scale,
            phase_offset: correction.phase_offset,
            lock_tau_t: correction.lock_tau_t,
            rel_tol: integrator.rel_tol,
            abs_tol: integrator.abs_tol,
            max_step: integrator.max_step,
            eps_cut: DEFAULT_EPS_CUT,
            samples: DEFAULT_SAMPLES,
            out: PathBuf::from("out"),
            workers: 0,
            axes: Vec::new(),
            metrics: vec![Metric::Fidelity, Metric::Loss, Metric::TransferTime],
        }
    }
}

impl CliConfig {
    pub fn protocol_spec(&self) -> ProtocolSpec {
        match self.alpha {
            Some(a) => ProtocolSpec::with_alpha(self.protocol, a),
            None => ProtocolSpec::new(self.protocol),
        }
    }

    pub fn run_config(&self) -> RunConfig {
        let mut drive = DriveParams::new(self.omega_t, self.tau_t, self.gamma_t);
        drive.width = self.width;
        drive.detuning = match self.delta_p_ratio {
            Some(r) => Detuning::Proportional(r),
            None => Detuning::Constant(self.delta_p),
        };
        let mut config = RunConfig::new(self.protocol_spec(), drive, self.mode);
        config.correction = Correction {
            lock_tau_t: self.lock_tau_t,
            area_scale: self.area_scale,
            phase_offset: self.phase_offset,
        };
        config.integrator.rel_tol = self.rel_tol;
        config.integrator.abs_tol = self.abs_tol;
        config.integrator.max_step = self.max_step;
        config.eps_cut = self.eps_cut;
        config.samples = self.samples;
        config
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            axes: self.axes.clone(),
            base: self.run_config(),
            metrics: self.metrics.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let config = self.run_config();
        config.protocol.validate()?;
        config.drive.validate(&config.protocol)?;
        config.validate()?;
        for axis in &self.axes {
            axis.validate()?;
        }
        Ok(())
    }

    pub fn workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config fields are TOML-representable")
    }
}

/// Parses and validates a TOML config; unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<CliConfig> {
    let config: CliConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Parser)]
#[command(
    name = "stirap",
    version,
    about = "Three-level STIRAP and superadiabatic STIRAP simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate one configuration and write trajectory and metrics CSVs.
    Simulate,
    /// Evaluate the configured parameter grid.
    Sweep,
    /// Run one frozen figure job.
    Figure { name: String },
    /// Print the protocol table with its pi-area check.
    Catalog,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long = "abs-tol", global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub protocol: Option<Family>,
    #[arg(long, global = true)]
    pub mode: Option<DriveMode>,
    #[arg(long = "omega-T", global = true)]
    pub omega_t: Option<f64>,
    #[arg(long = "tau-T", global = true, allow_hyphen_values = true)]
    pub tau_t: Option<f64>,
    #[arg(long = "gamma-T", global = true)]
    pub gamma_t: Option<f64>,
    #[arg(long = "area-scale", global = true)]
    pub area_scale: Option<f64>,
    #[arg(long = "phase-offset", global = true, allow_hyphen_values = true)]
    pub phase_offset: Option<f64>,
    #[arg(long = "lock-tau-T", global = true)]
    pub lock_tau_t: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut CliConfig) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    config.$field = v;
                }
            )*};
        }
        set!(
            out,
            workers,
            rel_tol,
            abs_tol,
            protocol,
            mode,
            omega_t,
            tau_t,
            gamma_t,
            area_scale,
            phase_offset
        );
        if self.lock_tau_t.is_some() {
            config.lock_tau_t = self.lock_tau_t;
        }
    }

    /// Config file (or defaults) with command-line flags applied on top.
    pub fn resolve(&self) -> Result<CliConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                toml::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => CliConfig::default(),
        };
        self.apply(&mut config);
        config.validate()?;
        Ok(config)
    }
}

/// Writes `path` through a temporary sibling so partial files never appear.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp).and_then(|file| {
        let mut out = BufWriter::new(file);
        write(&mut out)?;
        out.flush()?;
        out.get_ref().sync_all()
    });
    match result.and_then(|_| fs::rename(&tmp, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

/// Writes `trajectory.csv` and `metrics.csv` into the output directory.
pub fn simulate_cmd(config: &CliConfig) -> Result<Vec<PathBuf>> {
    let (trajectory, report) = simulate(&config.run_config())?;
    let traj = config.out.join("trajectory.csv");
    let metrics = config.out.join("metrics.csv");
    write_atomic(&traj, |w| trajectory.write_csv(w))?;
    write_atomic(&metrics, |w| report.write_csv(w))?;
    Ok(vec![traj, metrics])
}

/// Writes `sweep.csv` for the configured axes.
pub fn sweep_cmd(config: &CliConfig) -> Result<Vec<PathBuf>> {
    if config.axes.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one entry in `axes`".into(),
        ));
    }
    let table = run_grid(&config.grid_spec(), config.workers())?;
    let path = config.out.join("sweep.csv");
    write_atomic(&path, |w| table.write_csv(w))?;
    Ok(vec![path])
}

/// Writes `<name>.csv`; configured axes and tolerances override the frozen job.
pub fn figure_cmd(name: &str, config: &CliConfig) -> Result<Vec<PathBuf>> {
    let figure: Figure = name.parse()?;
    let mut job = figure_job(figure);
    let tune = |c: &mut RunConfig| {
        c.integrator.rel_tol = config.rel_tol;
        c.integrator.abs_tol = config.abs_tol;
        c.integrator.max_step = config.max_step;
    };
    match &mut job {
        FigureJob::Pulses { config: c } | FigureJob::Trajectory { config: c } => tune(c),
        FigureJob::Grid(spec) => {
            tune(&mut spec.base);
            if !config.axes.is_empty() {
                spec.axes = config.axes.clone();
            }
        }
        FigureJob::TransferTimes { .. } => {}
    }
    let data = run_figure(&job, config.workers())?;
    let path = config.out.join(format!("{figure}.csv"));
    write_atomic(&path, |w| data.write_csv(w))?;
    Ok(vec![path])
}

/// One catalog line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub family: Family,
    pub tau_t: Option<f64>,
    pub eps1: f64,
    pub eps2: f64,
    pub window: (f64, f64),
    pub area: f64,
    /// `pi - 2 (eps1 + eps2)` with the tabulated deviations.
    pub predicted: f64,
}

impl CatalogRow {
    pub fn passes(&self) -> bool {
        (self.area - self.predicted).abs() < CATALOG_TOLERANCE
    }
}

/// Delay used for the catalog entry of `family`.
pub fn catalog_tau(family: Family) -> Option<f64> {
    match family {
        Family::Sin4 => Some(0.3),
        f if f.uses_tau() => Some(0.5),
        _ => None,
    }
}

pub fn catalog() -> Result<Vec<CatalogRow>> {
    Family::ALL
        .into_iter()
        .map(|family| {
            let tau_t = catalog_tau(family);
            let spec = ProtocolSpec::new(family);
            let pulses = Pulses::new(spec, DriveParams::new(1.0, tau_t.unwrap_or(0.5), 0.0))?;
            let (eps1, eps2) = pulses.table_deviations();
            let window = pulses.window(DEFAULT_EPS_CUT)?;
            Ok(CatalogRow {
                family,
                tau_t,
                eps1,
                eps2,
                window,
                area: detuning_area_of(&pulses, window),
                predicted: std::f64::consts::PI - 2.0 * (eps1 + eps2),
            })
        })
        .collect()
}

pub fn catalog_cmd<W: Write>(mut out: W) -> Result<Vec<CatalogRow>> {
    let rows = catalog()?;
    writeln!(
        out,
        "protocol,tau_T,eps1,eps2,t_i,t_f,area,pi_minus_2eps,check"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{:.6e},{:.6e},{:.6},{:.6},{:.9},{:.9},{}",
            r.family,
            r.tau_t.map(|t| t.to_string()).unwrap_or_default(),
            r.eps1,
            r.eps2,
            r.window.0,
            r.window.1,
            r.area,
            r.predicted,
            if r.passes() { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(rows)
}

/// Parses the process arguments and runs the selected command.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => e.exit(),
        _ => Error::Config(e.to_string()),
    })?;
    if let Command::Catalog = cli.command {
        catalog_cmd(io::stdout().lock())?;
        return Ok(());
    }
    let config = cli.overrides.resolve()?;
    let written = match &cli.command {
        Command::Simulate => simulate_cmd(&config)?,
        Command::Sweep => sweep_cmd(&config)?,
        Command::Figure { name } => figure_cmd(name, &config)?,
        Command::Catalog => unreachable!(),
    };
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
