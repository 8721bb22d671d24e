//! The experiment driver behind the `halfwave` binary.
//!
//! Each command resolves its configuration completely before touching the
//! file system, so configuration errors leave no output behind. Outputs are
//! deterministic; timing only goes into the manifest.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{RunConfig, SeedSpec};
use crate::error::{Error, Result};
use crate::evolution::{self, EvolutionConfig, RunStatus};
use crate::field::Field;
use crate::grid::Grid;
use crate::identities;
use crate::io::{self, Summary};
use crate::kernel;
use crate::manifest::{self, RunManifest};
use crate::params::{critical_exponent, Velocity, WaveParams};
use crate::solver::{self, SolverConfig};
use crate::spectral;
use crate::sweep::{self, SweepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Sweep,
    Evolve,
    Kernel,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Sweep => "sweep",
            Self::Evolve => "evolve",
            Self::Kernel => "kernel",
            Self::Check => "check",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::Solve, Self::Sweep, Self::Evolve, Self::Kernel, Self::Check].into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Config = 2,
    NonConvergence = 3,
    BlowUp = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A command failure with its exit status.
#[derive(Debug)]
pub struct LabError {
    pub exit: Exit,
    pub error: Error,
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for LabError {}

fn config_error(error: Error) -> LabError {
    LabError { exit: Exit::Config, error }
}

fn failure(error: Error) -> LabError {
    LabError { exit: Exit::Failure, error }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: Exit,
    pub out_dir: PathBuf,
    pub summary: Summary,
    pub manifest: RunManifest,
}

pub const DEFAULT_OUT_DIR: &str = "halfwave-out";

/// Resolves `config`, runs `command`, writes its outputs and the manifest.
pub fn run(command: Command, config: RunConfig) -> std::result::Result<Outcome, LabError> {
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let job = Job::resolve(command, config).map_err(config_error)?;
    let out_dir = job.config.out_dir.clone().expect("resolved");
    fs::create_dir_all(&out_dir).map_err(|e| failure(e.into()))?;

    let produced = job.execute(&out_dir).map_err(failure)?;
    let outputs = produced
        .files
        .iter()
        .map(|f| manifest::digest_file(&out_dir, f))
        .collect::<Result<Vec<_>>>()
        .map_err(failure)?;
    let manifest = RunManifest {
        command: command.name().to_string(),
        config: job.config.clone(),
        version: manifest::version_string(),
        started_unix,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        exit_code: produced.exit.code(),
        outputs,
    };
    manifest.write(&out_dir).map_err(failure)?;
    Ok(Outcome { exit: produced.exit, out_dir, summary: produced.summary, manifest })
}

#[derive(Debug, Clone)]
pub struct ReplayReport {
    pub original: RunManifest,
    pub replayed: RunManifest,
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn identical(&self) -> bool {
        self.mismatches.is_empty() && self.original.outputs.len() == self.replayed.outputs.len()
    }
}

/// Re-runs the command recorded in a manifest into `out_dir` and compares
/// output digests.
pub fn replay(manifest_path: &Path, out_dir: &Path) -> std::result::Result<ReplayReport, LabError> {
    let original = RunManifest::load(manifest_path).map_err(config_error)?;
    let command = Command::from_name(&original.command)
        .ok_or_else(|| config_error(Error::Config(format!("unknown command '{}' in manifest", original.command))))?;
    let config = RunConfig { out_dir: Some(out_dir.to_path_buf()), ..original.config.clone() };
    let outcome = run(command, config)?;
    let mismatches = original.mismatches(&outcome.manifest);
    Ok(ReplayReport { original, replayed: outcome.manifest, mismatches })
}

struct Produced {
    exit: Exit,
    summary: Summary,
    files: Vec<String>,
}

const SUMMARY_FILE: &str = "summary.txt";

fn default_n(dim: usize) -> usize {
    match dim {
        1 => 4096,
        2 => 256,
        _ => 64,
    }
}

fn default_half_extent(dim: usize) -> f64 {
    match dim {
        1 => 200.0 * PI,
        2 => 50.0,
        _ => 20.0,
    }
}

/// Velocity from the `v` key: `d` components, or one speed along the first axis.
fn velocity_from(values: &[f64], dim: usize) -> Result<Velocity> {
    match values.len() {
        0 => Ok(Velocity::zero(dim)),
        1 => {
            let v = Velocity::along_first_axis(dim, values[0]);
            Velocity::new(v.components().to_vec())
        }
        k if k == dim => Velocity::new(values.to_vec()),
        k => Err(Error::Config(format!("v has {k} values; give one speed or {dim} components"))),
    }
}

struct Job {
    command: Command,
    config: RunConfig,
}

impl Job {
    fn resolve(command: Command, mut c: RunConfig) -> Result<Self> {
        let dim = c.d.unwrap_or(1);
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("d must be 1, 2 or 3, got {dim}")));
        }
        c.d = Some(dim);
        c.out_dir.get_or_insert_with(|| PathBuf::from(DEFAULT_OUT_DIR));
        c.tol.get_or_insert(1e-10);
        c.max_iters.get_or_insert(2000);
        c.seed_profile.get_or_insert_with(|| "gaussian".into());
        c.jobs.get_or_insert(1);
        match command {
            Command::Solve => {
                let critical = *c.critical.get_or_insert(false);
                c.p.get_or_insert(if critical { critical_exponent(dim) } else { 2.0 });
                c.v.get_or_insert_with(|| vec![0.0]);
                c.n.get_or_insert(default_n(dim));
                c.half_extent.get_or_insert(default_half_extent(dim));
            }
            Command::Sweep => {
                c.p.get_or_insert(3.0);
                c.v.get_or_insert_with(|| sweep::geometric_speeds(2.5e-3, 0.1, 5));
                c.half_extent.get_or_insert(50.0);
                c.spacing.get_or_insert(0.1);
                c.max_n.get_or_insert(1 << 20);
                c.gate.get_or_insert(1e-3);
                c.max_iters = Some(c.max_iters.unwrap().max(5000));
            }
            Command::Evolve => {
                c.p.get_or_insert(3.0);
                if c.input.is_none() {
                    c.v.get_or_insert_with(|| vec![0.5]);
                    c.n.get_or_insert(4096);
                    c.half_extent.get_or_insert(50.0);
                }
                c.dt.get_or_insert(1e-3);
                c.final_time.get_or_insert(5.0);
                c.record_every.get_or_insert(0.5);
                c.nonlinear.get_or_insert(true);
            }
            Command::Kernel => {
                c.v.get_or_insert_with(|| vec![0.0]);
                c.radii.get_or_insert_with(|| (0..8).map(|k| 10f64.powf(1.0 + k as f64 / 7.0)).collect());
            }
            Command::Check => {
                c.p.get_or_insert(2.0);
                c.v.get_or_insert_with(|| vec![0.0]);
                if c.input.is_none() {
                    return Err(Error::Config("check needs an input profile (--input)".into()));
                }
            }
        }
        let job = Self { command, config: c };
        job.validate()?;
        Ok(job)
    }

    // everything that can be checked without running
    fn validate(&self) -> Result<()> {
        let c = &self.config;
        let dim = c.d.unwrap();
        let cfg_err = |e: Error| Error::Config(e.to_string());
        self.solver_config().and_then(|s| s.validate()).map_err(cfg_err)?;
        if let Some(n) = c.n {
            Grid::new(dim, n, c.half_extent.unwrap_or(1.0)).map_err(cfg_err)?;
        }
        if c.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        match self.command {
            Command::Solve => {
                let v = velocity_from(c.v.as_deref().unwrap(), dim)?;
                let p = c.p.unwrap();
                if c.critical == Some(true) {
                    if dim < 2 || p != critical_exponent(dim) {
                        return Err(Error::Config(format!("critical solve needs d >= 2 and p = {}", critical_exponent(dim))));
                    }
                    if !v.is_subluminal() {
                        return Err(Error::Config("critical solve needs |v| < 1".into()));
                    }
                } else {
                    WaveParams::new(dim, p, v).and_then(|w| w.ensure_subcritical()).map_err(cfg_err)?;
                }
            }
            Command::Sweep => {
                self.sweep_config()?.validate().map_err(cfg_err)?;
            }
            Command::Evolve => {
                let p = c.p.unwrap();
                if !(p > 1.0 && p.is_finite()) {
                    return Err(Error::Config(format!("p must exceed 1, got {p}")));
                }
                if let Some(input) = &c.input {
                    if !input.is_file() {
                        return Err(Error::Config(format!("input {} does not exist", input.display())));
                    }
                } else {
                    let v = velocity_from(c.v.as_deref().unwrap(), dim)?;
                    WaveParams::new(dim, p, v.clone()).and_then(|w| w.ensure_subcritical()).map_err(cfg_err)?;
                    if !v.is_subluminal() {
                        return Err(Error::Config("the traveling wave needs |v| < 1".into()));
                    }
                }
                let stride = self.record_stride()?;
                let grid = Grid::new(dim, c.n.unwrap_or(8), c.half_extent.unwrap_or(1.0)).map_err(cfg_err)?;
                self.evolution_config(stride).validate(&grid).map_err(cfg_err)?;
            }
            Command::Kernel => {
                let radii = c.radii.as_deref().unwrap();
                if radii.is_empty() {
                    return Err(Error::Config("kernel needs at least one radius".into()));
                }
                if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                    return Err(Error::Config("radii must be positive".into()));
                }
                let v = velocity_from(c.v.as_deref().unwrap(), dim)?;
                if !v.is_subluminal() {
                    return Err(Error::Config("kernel needs |v| < 1".into()));
                }
            }
            Command::Check => {
                let v = velocity_from(c.v.as_deref().unwrap(), dim)?;
                WaveParams::new(dim, c.p.unwrap(), v).map_err(cfg_err)?;
                let input = c.input.as_ref().unwrap();
                if !input.is_file() {
                    return Err(Error::Config(format!("input {} does not exist", input.display())));
                }
            }
        }
        Ok(())
    }

    fn solver_config(&self) -> Result<SolverConfig> {
        let c = &self.config;
        let spec: SeedSpec = c.seed_profile.as_deref().unwrap().parse()?;
        let seed = match spec {
            // loaded on demand; only the grid check needs the contents
            SeedSpec::File(ref path) if !path.is_file() => {
                return Err(Error::Config(format!("seed file {} does not exist", path.display())))
            }
            s => s.load()?,
        };
        Ok(SolverConfig { max_iters: c.max_iters.unwrap(), tol: c.tol.unwrap(), seed, ..SolverConfig::default() })
    }

    fn sweep_config(&self) -> Result<SweepConfig> {
        let c = &self.config;
        let mut s = SweepConfig::new(c.d.unwrap(), c.p.unwrap(), c.v.clone().unwrap());
        s.half_extent = c.half_extent.unwrap();
        s.spacing_factor = c.spacing.unwrap();
        s.max_n = c.max_n.unwrap();
        s.gate = c.gate.unwrap();
        s.jobs = c.jobs.unwrap();
        s.solver = self.solver_config()?;
        Ok(s)
    }

    fn record_stride(&self) -> Result<usize> {
        let c = &self.config;
        let (dt, every) = (c.dt.unwrap(), c.record_every.unwrap());
        if !(dt > 0.0 && every > 0.0) {
            return Err(Error::Config("dt and record_every must be positive".into()));
        }
        let stride = (every / dt).round();
        if stride < 1.0 || ((stride * dt) - every).abs() > 1e-9 * every {
            return Err(Error::Config(format!("record_every = {every} is not a whole number of steps of {dt}")));
        }
        Ok(stride as usize)
    }

    fn evolution_config(&self, stride: usize) -> EvolutionConfig {
        let c = &self.config;
        EvolutionConfig {
            dt: c.dt.unwrap(),
            final_time: c.final_time.unwrap(),
            record_stride: stride,
            nonlinear: c.nonlinear.unwrap(),
            ..EvolutionConfig::default()
        }
    }

    fn grid(&self) -> Result<Grid> {
        let c = &self.config;
        Grid::new(c.d.unwrap(), c.n.unwrap(), c.half_extent.unwrap())
    }

    fn execute(&self, out: &Path) -> Result<Produced> {
        match self.command {
            Command::Solve => self.solve(out),
            Command::Sweep => self.sweep(out),
            Command::Evolve => self.evolve(out),
            Command::Kernel => self.kernel(out),
            Command::Check => self.check(out),
        }
    }

    fn solve(&self, out: &Path) -> Result<Produced> {
        let c = &self.config;
        let dim = c.d.unwrap();
        let p = c.p.unwrap();
        let velocity = velocity_from(c.v.as_deref().unwrap(), dim)?;
        let grid = self.grid()?;
        let cfg = self.solver_config()?;
        let mut s = Summary::new();
        s.push("command", "solve").push("d", dim).push("p", p).push("v", format!("{:?}", velocity.components()));
        s.push("n", grid.n()).push_f64("L", grid.half_extent());

        if !velocity.is_subluminal() {
            let params = WaveParams::new(dim, p, velocity)?;
            let report = identities::nonexistence_probe(&params, &grid, &cfg)?;
            s.push("mode", "nonexistence-probe").push("outcome", report.label());
            match &report.outcome {
                identities::ProbeOutcome::TrivialLimit { iters } => {
                    s.push("iters", iters);
                }
                identities::ProbeOutcome::Divergence { iters, reason } => {
                    s.push("iters", iters).push("reason", reason);
                }
                identities::ProbeOutcome::NonzeroFixedPoint { virial_residual, el_residual, iters } => {
                    s.push_f64("virial_residual", *virial_residual).push_f64("el_residual", *el_residual).push("iters", iters);
                }
                identities::ProbeOutcome::NoConvergence { el_residual, iters } => {
                    s.push_f64("el_residual", *el_residual).push("iters", iters);
                }
            }
            s.write(&out.join(SUMMARY_FILE))?;
            return Ok(Produced { exit: Exit::Ok, summary: s, files: vec![SUMMARY_FILE.into()] });
        }

        let critical = c.critical == Some(true);
        let res = if critical {
            solver::solve_critical_profile(dim, &velocity, &grid, &cfg)?
        } else {
            solver::solve_profile(&WaveParams::new(dim, p, velocity.clone())?, &grid, &cfg)?
        };
        s.push("mode", if critical { "energy-critical" } else { "profile" });
        s.push("converged", res.converged).push("iters", res.iters);
        s.push_f64("el_residual", res.el_residual).push_f64("gamma", res.gamma);
        s.push_f64("t_v", res.t_v).push_f64("mass", res.mass).push_f64("lp1_integral", res.lp1_integral);
        s.push_f64("weinstein_value", res.weinstein_value).push_f64("optimal_constant", res.optimal_constant);
        s.push_f64("boundary_fraction", res.boundary_fraction);
        if critical {
            s.push("mass_leakage", res.mass_leakage);
            s.push_f64("critical_identity_residual", (res.t_v - res.lp1_integral).abs() / res.t_v);
        } else {
            let report = identities::identity_report(&res.profile, &res.params)?;
            for (k, r) in report.virial_residuals.iter().enumerate() {
                s.push_f64(format!("virial_residual_{}", k + 1), *r);
            }
            s.push_f64("pohozaev_residual_1", report.pohozaev_residual_1);
            s.push_f64("pohozaev_residual_2", report.pohozaev_residual_2);
            if dim == 1 && p == 2.0 && velocity.speed() == 0.0 {
                let err = solver::peak_aligned_error(&res.profile, &solver::explicit_q0(&grid))?;
                s.push_f64("q0_error", err);
            }
        }
        io::write_field(&out.join("profile.hwf"), &res.profile)?;
        s.write(&out.join(SUMMARY_FILE))?;
        let exit = if res.converged { Exit::Ok } else { Exit::NonConvergence };
        Ok(Produced { exit, summary: s, files: vec!["profile.hwf".into(), SUMMARY_FILE.into()] })
    }

    fn sweep(&self, out: &Path) -> Result<Produced> {
        let cfg = self.sweep_config()?;
        let records = sweep::run_sweep(&cfg)?;
        io::write_csv(&out.join("sweep.csv"), &records)?;
        let mut s = Summary::new();
        s.push("command", "sweep").push("d", cfg.dim).push("p", cfg.p).push("rows", records.len());
        let usable = records.iter().filter(|r| r.usable()).count();
        s.push("usable_rows", usable);
        let fits = [
            ("c_v", sweep::log_slope(&records, |r| r.c_v)),
            ("mass", sweep::log_slope(&records, |r| r.mass)),
            ("hhalf_sq", sweep::log_slope(&records, |r| r.hhalf_sq)),
        ];
        for (name, fit) in fits {
            match fit {
                Ok(f) => {
                    s.push_f64(format!("slope_{name}"), f.slope).push_f64(format!("slope_{name}_halfwidth"), f.half_width);
                }
                Err(e) => {
                    s.push(format!("slope_{name}"), format!("unavailable ({e})"));
                }
            }
        }
        if let Ok(sw) = sweep::small_wave_fit(&records, cfg.dim, cfg.p) {
            s.push_f64("small_wave_exponent", sw.exponent)
                .push_f64("small_wave_constant", sw.constant)
                .push_f64("small_wave_max_deviation", sw.max_deviation)
                .push("small_wave_monotone", sw.monotone);
        }
        s.write(&out.join(SUMMARY_FILE))?;
        let exit = if usable == 0 { Exit::NonConvergence } else { Exit::Ok };
        Ok(Produced { exit, summary: s, files: vec!["sweep.csv".into(), SUMMARY_FILE.into()] })
    }

    fn evolve(&self, out: &Path) -> Result<Produced> {
        let c = &self.config;
        let p = c.p.unwrap();
        let mut s = Summary::new();
        s.push("command", "evolve").push("p", p);
        let mut files = Vec::new();

        // initial datum, and the traveling wave it should follow if freshly solved
        let (u0, wave) = match &c.input {
            Some(path) => (io::read_field(path)?, None),
            None => {
                let dim = c.d.unwrap();
                let velocity = velocity_from(c.v.as_deref().unwrap(), dim)?;
                let params = WaveParams::new(dim, p, velocity)?;
                let res = solver::solve_profile(&params, &self.grid()?, &self.solver_config()?)?;
                s.push("profile_converged", res.converged).push_f64("profile_el_residual", res.el_residual);
                if !res.converged {
                    s.write(&out.join(SUMMARY_FILE))?;
                    return Ok(Produced { exit: Exit::NonConvergence, summary: s, files: vec![SUMMARY_FILE.into()] });
                }
                (res.profile.clone(), Some((res.profile, params)))
            }
        };
        let g = *u0.grid();
        s.push("d", g.dim()).push("n", g.n()).push_f64("L", g.half_extent());
        let stride = self.record_stride()?;
        let cfg = self.evolution_config(stride);
        s.push_f64("dt", cfg.dt).push_f64("T", cfg.final_time).push("nonlinear", cfg.nonlinear);
        let traj = evolution::evolve(&u0, p, &cfg)?;

        for (k, (_, u)) in traj.snapshots.iter().enumerate() {
            let name = format!("snapshot_{k:04}.hwf");
            io::write_field(&out.join(&name), u)?;
            files.push(name);
        }
        io::write_csv(&out.join("diagnostics.csv"), &traj.diagnostics)?;
        files.push("diagnostics.csv".into());

        // unit windows of length 2 starting at every whole time
        #[derive(Serialize)]
        struct Window {
            t1: f64,
            t2: f64,
            defect: f64,
        }
        let mut windows = Vec::new();
        let mut t1 = 1.0;
        while t1 + 2.0 <= cfg.final_time + 1e-12 {
            if let Ok(d) = evolution::scattering_defect(&traj, t1, t1 + 2.0) {
                windows.push(Window { t1, t2: t1 + 2.0, defect: d });
            }
            t1 += 1.0;
        }
        io::write_csv(&out.join("defects.csv"), &windows)?;
        files.push("defects.csv".into());

        s.push("snapshots", traj.snapshots.len());
        s.push_f64("mass_drift", traj.mass_drift()).push_f64("energy_drift", traj.energy_drift());
        let h = evolution::h_half_norm(&u0);
        s.push_f64("h_half_norm", h);
        if let Some(min) = windows.iter().map(|w| w.defect).reduce(f64::min) {
            s.push_f64("min_window_defect", min).push_f64("min_window_defect_ratio", min / h);
        }
        if let Some((q, params)) = &wave {
            s.push_f64("persistence_error", evolution::persistence_error(&traj, q, params.v(), 1.0)?);
        }
        let exit = match traj.status {
            RunStatus::Completed => {
                s.push("status", "completed");
                Exit::Ok
            }
            RunStatus::BlowUp { t } => {
                s.push("status", "blow-up").push_f64("blow_up_time", t);
                Exit::BlowUp
            }
        };
        s.write(&out.join(SUMMARY_FILE))?;
        files.push(SUMMARY_FILE.into());
        Ok(Produced { exit, summary: s, files })
    }

    fn kernel(&self, out: &Path) -> Result<Produced> {
        let c = &self.config;
        let dim = c.d.unwrap();
        let velocity = velocity_from(c.v.as_deref().unwrap(), dim)?;
        let v = velocity.components();
        let radii = c.radii.clone().unwrap();
        let speed = velocity.speed();
        let dir: Vec<f64> = if speed > 0.0 {
            v.iter().map(|x| x / speed).collect()
        } else {
            Velocity::along_first_axis(dim, 1.0).components().to_vec()
        };

        #[derive(Serialize)]
        struct Row {
            radius: f64,
            re: f64,
            im: f64,
            scaled: f64,
            quadrature_error: f64,
            error: String,
        }
        let rows: Vec<Row> = radii
            .iter()
            .map(|&r| {
                let x: Vec<f64> = dir.iter().map(|d| r * d).collect();
                match kernel::kernel_eval(&x, v) {
                    Ok(k) => Row {
                        radius: r,
                        re: k.value.re,
                        im: k.value.im,
                        scaled: r.powi(dim as i32 + 1) * k.value.norm(),
                        quadrature_error: k.quadrature_error,
                        error: String::new(),
                    },
                    Err(e) => Row {
                        radius: r,
                        re: f64::NAN,
                        im: f64::NAN,
                        scaled: f64::NAN,
                        quadrature_error: f64::NAN,
                        error: e.to_string(),
                    },
                }
            })
            .collect();
        io::write_csv(&out.join("kernel.csv"), &rows)?;

        let mut s = Summary::new();
        s.push("command", "kernel").push("d", dim).push("v", format!("{v:?}")).push("radii", radii.len());
        s.push("failed_rows", rows.iter().filter(|r| !r.error.is_empty()).count());
        let decay_radii: Vec<f64> = radii.iter().copied().filter(|r| *r >= 1.0).collect();
        match kernel::decay_check(v, &decay_radii) {
            Ok(d) => {
                s.push_f64("decay_slope", d.slope).push_f64("decay_constant", d.constant).push_f64("band_ratio", d.band_ratio);
            }
            Err(e) => {
                s.push("decay_slope", format!("unavailable ({e})"));
            }
        }
        s.write(&out.join(SUMMARY_FILE))?;
        Ok(Produced { exit: Exit::Ok, summary: s, files: vec!["kernel.csv".into(), SUMMARY_FILE.into()] })
    }

    fn check(&self, out: &Path) -> Result<Produced> {
        let c = &self.config;
        let q = io::read_field(c.input.as_ref().unwrap())?;
        let dim = q.grid().dim();
        if dim != c.d.unwrap() {
            return Err(Error::GridMismatch(format!("profile is {dim}-d, configuration says d = {}", c.d.unwrap())));
        }
        let params = WaveParams::new(dim, c.p.unwrap(), velocity_from(c.v.as_deref().unwrap(), dim)?)?;
        let report = identities::identity_report(&q, &params)?;
        let mut s = Summary::new();
        s.push("command", "check").push("d", dim).push("p", params.p).push("v", format!("{:?}", params.v()));
        for (k, r) in report.virial_residuals.iter().enumerate() {
            s.push_f64(format!("virial_residual_{}", k + 1), *r);
        }
        s.push_f64("pohozaev_residual_1", report.pohozaev_residual_1);
        s.push_f64("pohozaev_residual_2", report.pohozaev_residual_2);
        s.push_f64("el_residual", report.el_residual);
        if params.speed() < 1.0 && params.is_subcritical() {
            s.push_f64("weinstein_value", solver::weinstein(&q, params.v(), params.p)?);
        }
        s.push_f64("t_v", spectral::quadratic_form_t(&q, params.v())).push_f64("mass", q.mass());
        s.write(&out.join(SUMMARY_FILE))?;
        Ok(Produced { exit: Exit::Ok, summary: s, files: vec![SUMMARY_FILE.into()] })
    }
}

/// Reads a profile written by `solve`.
pub fn load_profile(dir: &Path) -> Result<Field> {
    io::read_field(&dir.join("profile.hwf"))
}
