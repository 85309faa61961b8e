//! Experiment orchestration: configuration files, named scenarios with
//! pass/fail assertions, parallel sweeps, and CSV/JSON persistence.
//!
//! # Config grammar
//!
//! One `key = value` pair per line; `#` starts a comment; blank lines are
//! ignored. Keys are dotted. Lists are comma separated.
//!
//! ```text
//! k = 6
//! mu = -1
//! grid.n = 512
//! grid.length = 50
//! t_final = 10
//! record_every = 200
//! s_track = 1
//! dt_override = 1e-4          # optional
//! initial.kind = gaussian     # gaussian | soliton | scaled_ground_state | from_file | random
//! initial.amplitude = 0.9
//! initial.width = 2
//! initial.center = 0
//! initial.c = 1               # soliton speed
//! initial.scale = 1           # dilation of scaled_ground_state
//! initial.file = state.csv    # checkpoint for from_file, relative to the config
//! initial.decay = 1.5         # spectral decay exponent for random
//! imethod.N_list = 4, 8, 16, 32
//! imethod.s = 0.9
//! resonance.N = 16
//! resonance.budget = 10000000
//! schedule.T = 100
//! output.dir = out
//! seed = 7
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{self, InvariantSeries, SimOptions};
use crate::imethod::{self, IMethodParams};
use crate::invariants::{self, ClosedForm, ModelParams, ThresholdReport};
use crate::spectral::{Field, Grid};

/// Environment variable overriding `output.dir`.
pub const OUT_ENV: &str = "GKDV_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Gaussian,
    Soliton,
    ScaledGroundState,
    FromFile,
    Random,
}

impl FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gaussian" => InitialKind::Gaussian,
            "soliton" => InitialKind::Soliton,
            "scaled_ground_state" => InitialKind::ScaledGroundState,
            "from_file" => InitialKind::FromFile,
            "random" => InitialKind::Random,
            _ => return Err(Error::Config(format!("unknown initial.kind '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InitialSpec {
    pub kind: InitialKind,
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    pub c: f64,
    pub scale: f64,
    pub file: Option<PathBuf>,
    pub decay: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub k: u32,
    pub mu: i8,
    pub grid_n: usize,
    pub grid_length: f64,
    pub dt_override: Option<f64>,
    pub t_final: f64,
    pub record_every: usize,
    pub s_track: f64,
    pub initial: InitialSpec,
    pub imethod_n_list: Vec<f64>,
    pub imethod_s: Option<f64>,
    pub resonance_n: f64,
    pub resonance_budget: u64,
    pub schedule_t: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            k: 5,
            mu: 1,
            grid_n: 512,
            grid_length: 50.0,
            dt_override: None,
            t_final: 1.0,
            record_every: 100,
            s_track: 1.0,
            initial: InitialSpec {
                kind: InitialKind::Gaussian,
                amplitude: 1.0,
                width: 1.0,
                center: 0.0,
                c: 1.0,
                scale: 1.0,
                file: None,
                decay: 1.0,
            },
            imethod_n_list: Vec::new(),
            imethod_s: None,
            resonance_n: 16.0,
            resonance_budget: 10_000_000,
            schedule_t: 100.0,
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: '{v}'")))
}

impl SimConfig {
    /// Parses the flat `key = value` format; relative `initial.file` paths
    /// are resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut c = SimConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "k" => c.k = parse_num(key, val)?,
                "mu" => c.mu = parse_num(key, val)?,
                "grid.n" => c.grid_n = parse_num(key, val)?,
                "grid.length" => c.grid_length = parse_num(key, val)?,
                "dt_override" => c.dt_override = Some(parse_num(key, val)?),
                "t_final" => c.t_final = parse_num(key, val)?,
                "record_every" => c.record_every = parse_num(key, val)?,
                "s_track" => c.s_track = parse_num(key, val)?,
                "initial.kind" => c.initial.kind = val.parse()?,
                "initial.amplitude" => c.initial.amplitude = parse_num(key, val)?,
                "initial.width" => c.initial.width = parse_num(key, val)?,
                "initial.center" => c.initial.center = parse_num(key, val)?,
                "initial.c" => c.initial.c = parse_num(key, val)?,
                "initial.scale" => c.initial.scale = parse_num(key, val)?,
                "initial.decay" => c.initial.decay = parse_num(key, val)?,
                "initial.file" => {
                    let p = PathBuf::from(val);
                    c.initial.file = Some(match base {
                        Some(b) if p.is_relative() => b.join(p),
                        _ => p,
                    });
                }
                "imethod.N_list" => {
                    c.imethod_n_list = val
                        .split(',')
                        .map(|x| parse_num(key, x.trim()))
                        .collect::<Result<_>>()?
                }
                "imethod.s" => c.imethod_s = Some(parse_num(key, val)?),
                "resonance.N" => c.resonance_n = parse_num(key, val)?,
                "resonance.budget" => c.resonance_budget = parse_num(key, val)?,
                "schedule.T" => c.schedule_t = parse_num(key, val)?,
                "output.dir" => c.output_dir = PathBuf::from(val),
                "seed" => c.seed = parse_num(key, val)?,
                _ => return Err(Error::Config(format!("unknown key '{key}'"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.k, self.mu)?;
        Grid::new(self.grid_n, self.grid_length)?;
        if self.initial.kind == InitialKind::FromFile {
            match &self.initial.file {
                Some(p) if p.exists() => {}
                Some(p) => return Err(Error::Config(format!("initial.file {} does not exist", p.display()))),
                None => return Err(Error::Config("initial.kind = from_file needs initial.file".into())),
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.k, self.mu)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n, self.grid_length)
    }

    /// Output directory after applying the `GKDV_OUT` override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| self.output_dir.clone())
    }

    /// Samples the configured initial data. A checkpoint brings its own grid.
    pub fn initial_field(&self) -> Result<Field> {
        let grid = self.grid()?;
        let i = &self.initial;
        Ok(match i.kind {
            InitialKind::Gaussian => ClosedForm::Gaussian {
                amplitude: i.amplitude,
                width: i.width,
                center: i.center,
            }
            .sample(&grid),
            InitialKind::Soliton => evolution::soliton(self.k, i.c, i.center, &grid, 0.0)?,
            InitialKind::ScaledGroundState => ClosedForm::ScaledGroundState {
                k: self.k,
                amplitude: i.amplitude,
                dilation: i.scale,
            }
            .sample(&grid),
            InitialKind::FromFile => {
                let path = i.file.as_ref().ok_or_else(|| Error::Config("initial.file missing".into()))?;
                evolution::load_checkpoint(path)?.field
            }
            InitialKind::Random => random_field(&grid, i.amplitude, i.decay, self.seed),
        })
    }

    fn sim_options(&self) -> SimOptions {
        let mut o = SimOptions::new(self.t_final);
        o.record_every = self.record_every;
        o.s_track = self.s_track;
        o.dt_override = self.dt_override;
        o
    }
}

/// Seeded random field with spectrum on modes `1 <= |j| <= n/8`, mode
/// amplitudes uniform in `[0, 1)` times `(1 + |j|)^{-decay}`, uniform phases,
/// scaled so that `max |u| = amplitude`.
pub fn random_field(grid: &Grid, amplitude: f64, decay: f64, seed: u64) -> Field {
    let n = grid.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![Complex64::default(); n];
    for j in 1..=(n / 8) as i64 {
        let r: f64 = rng.gen::<f64>() * (1.0 + j as f64).powf(-decay);
        let th: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        let z = Complex64::from_polar(r, th);
        c[grid.index(j)] = z;
        c[grid.index(-j)] = z.conj();
    }
    let f = Field::from_spectrum_unchecked(*grid, c);
    let m = f.max_abs();
    if m > 0.0 {
        f.scale(amplitude / m)
    } else {
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Conservation,
    SolitonRegression,
    ThresholdBarrier,
    DefocusingGrowth,
    ImethodSweep,
    GwpSchedule,
    Resonance,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Conservation,
        Scenario::SolitonRegression,
        Scenario::ThresholdBarrier,
        Scenario::DefocusingGrowth,
        Scenario::ImethodSweep,
        Scenario::GwpSchedule,
        Scenario::Resonance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Conservation => "conservation",
            Scenario::SolitonRegression => "soliton-regression",
            Scenario::ThresholdBarrier => "threshold-barrier",
            Scenario::DefocusingGrowth => "defocusing-growth",
            Scenario::ImethodSweep => "imethod-sweep",
            Scenario::GwpSchedule => "gwp-schedule",
            Scenario::Resonance => "resonance",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    /// The invariant being checked.
    pub invariant: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub config: SimConfig,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
    pub series_files: Vec<PathBuf>,
    pub threshold: Option<ThresholdReport>,
    pub sweep_slope: Option<f64>,
    pub under_resolved: bool,
    pub assertions: Vec<Assertion>,
    pub error: Option<String>,
}

impl RunReport {
    fn new(scenario: Scenario, config: &SimConfig) -> Self {
        RunReport {
            scenario,
            config: config.clone(),
            started_unix: unix_now(),
            finished_unix: 0.0,
            wall_seconds: 0.0,
            series_files: Vec::new(),
            threshold: None,
            sweep_slope: None,
            under_resolved: false,
            assertions: Vec::new(),
            error: None,
        }
    }

    fn check(&mut self, name: &str, invariant: &str, passed: bool, detail: String) {
        self.assertions.push(Assertion {
            name: name.into(),
            invariant: invariant.into(),
            passed,
            detail,
        });
    }

    /// True when the run finished and every assertion passed.
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn write_series(dir: &Path, name: &str, series: &InvariantSeries) -> Result<PathBuf> {
    let path = dir.join(format!("{name}_series.csv"));
    let mut buf = Vec::new();
    series.write_csv(&mut buf)?;
    std::fs::write(&path, buf)?;
    Ok(path)
}

/// Single-row CSV of a threshold report.
pub fn threshold_csv(r: &ThresholdReport) -> String {
    format!(
        "k,s_k,mass,energy,lhs1,rhs1,lhs2,rhs2,gr1_holds,gr2_holds,energy_nonneg,classification\n\
         {},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
        r.k, r.s_k, r.mass, r.energy, r.lhs1, r.rhs1, r.lhs2, r.rhs2, r.gr1_holds, r.gr2_holds,
        r.energy_nonneg, r.classification
    )
}

/// CSV `N,sup_increment,final_e1,resolved_flag`.
pub fn sweep_csv(r: &imethod::SweepResult) -> String {
    let mut s = String::from("N,sup_increment,final_e1,resolved_flag\n");
    for p in &r.points {
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{}\n",
            p.n_cut, p.sup_increment, p.final_e1, p.resolved
        ));
    }
    s
}

pub fn schedule_csv(s: &imethod::Schedule) -> String {
    format!(
        "k,s,T,lambda_exponent,n_exponent,log2_N,N,lambda,M,chunk_time,impractical\n\
         {},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
        s.k, s.s, s.t_target, s.lambda_exponent, s.n_exponent, s.log2_n, s.n, s.lambda,
        s.iterations, s.chunk_time, s.impractical
    )
}

pub fn witness_csv(w: &imethod::ResonanceWitness) -> String {
    let mut s = String::from("index,xi\n");
    for (i, x) in w.xi.iter().enumerate() {
        s.push_str(&format!("{i},{x:.16e}\n"));
    }
    s
}

/// Runs a named scenario, persists its artifacts and returns the report.
pub fn run_scenario(scenario: Scenario, config: &SimConfig) -> Result<RunReport> {
    config.validate()?;
    let clock = Instant::now();
    let dir = config.resolved_output_dir();
    std::fs::create_dir_all(&dir)?;
    let mut rep = RunReport::new(scenario, config);
    let name = scenario.name();
    match scenario {
        Scenario::Conservation => conservation(config, &dir, &mut rep)?,
        Scenario::SolitonRegression => soliton_regression(config, &dir, &mut rep)?,
        Scenario::ThresholdBarrier => threshold_barrier(config, &dir, &mut rep)?,
        Scenario::DefocusingGrowth => defocusing_growth(config, &dir, &mut rep)?,
        Scenario::ImethodSweep => imethod_sweep(config, &dir, &mut rep)?,
        Scenario::GwpSchedule => gwp_schedule(config, &dir, &mut rep)?,
        Scenario::Resonance => resonance(config, &dir, &mut rep)?,
    }
    rep.wall_seconds = clock.elapsed().as_secs_f64();
    rep.finished_unix = unix_now();
    std::fs::write(dir.join(format!("{name}_report.json")), rep.to_json()?)?;
    Ok(rep)
}

fn require(cond: bool, scenario: Scenario, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(format!("scenario {scenario} requires {what}")))
    }
}

fn h1_bound_check(rep: &mut RunReport, series: &InvariantSeries) {
    let bound = 2.0 * series.energy[0] + 1e-9;
    let worst = series.grad_l2.iter().map(|g| g * g).fold(0.0, f64::max);
    rep.check(
        "h1-bound",
        "defocusing even k: ||u_x(t)||^2 <= 2 E(u0) + 1e-9",
        worst <= bound,
        format!("max ||u_x||^2 = {worst:.6e}, bound = {bound:.6e}"),
    );
}

fn conservation(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let p = c.params()?;
    let u0 = c.initial_field()?;
    let series = evolution::simulate(&u0, p, &c.sim_options())?;
    rep.series_files.push(write_series(dir, "conservation", &series)?);
    rep.under_resolved = series.under_resolved;
    let (dm, de) = (series.mass_drift(), series.energy_drift());
    rep.check("mass-drift", "|M(t) - M(0)| / M(0) <= 1e-6", dm <= 1e-6, format!("{dm:.3e}"));
    rep.check(
        "energy-drift",
        "|E(t) - E(0)| / max(|E(0)|, 1e-12) <= 1e-6",
        de <= 1e-6,
        format!("{de:.3e}"),
    );
    rep.check("resolved", "spectral tail below 1e-8 of the mass", !series.under_resolved, String::new());
    if p.mu == -1 && p.k % 2 == 0 {
        h1_bound_check(rep, &series);
    }
    Ok(())
}

fn soliton_regression(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let sc = Scenario::SolitonRegression;
    require(c.mu == 1, sc, "mu = 1")?;
    require(c.initial.kind == InitialKind::Soliton, sc, "initial.kind = soliton")?;
    let p = c.params()?;
    let grid = c.grid()?;
    let u0 = c.initial_field()?;
    let (series, u_t) = evolution::simulate_to_state(&u0, p, &c.sim_options())?;
    rep.series_files.push(write_series(dir, "soliton-regression", &series)?);
    rep.under_resolved = series.under_resolved;
    let t_end = *series.times.last().expect("nonempty");
    let exact = evolution::soliton(c.k, c.initial.c, c.initial.center, &grid, t_end)?;
    let err = u_t.sub(&exact)?.l2_norm();
    rep.check("soliton-l2-error", "||u(T) - exact traveling wave||_L2 <= 1e-5", err <= 1e-5, format!("{err:.3e}"));
    let cap = 10.0 * series.grad_l2[0].powi(2);
    let blow = evolution::detect_blowup(&series, cap);
    rep.check(
        "no-blowup",
        "soliton run: no blow-up detected at cap = 10 x initial ||u_x||^2",
        blow.is_none(),
        format!("{blow:?}"),
    );
    Ok(())
}

fn threshold_barrier(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let sc = Scenario::ThresholdBarrier;
    require(c.mu == 1, sc, "mu = 1")?;
    let p = c.params()?;
    let u0 = c.initial_field()?;
    let tr = invariants::threshold_report(&u0, c.k)?;
    let bar = invariants::barrier(&u0, c.k)?;
    std::fs::write(dir.join("threshold-barrier_threshold.csv"), threshold_csv(&tr))?;
    rep.threshold = Some(tr);
    rep.check(
        "classification",
        "initial data satisfies the energy and gradient thresholds",
        tr.classification == invariants::Classification::TheoremApplies,
        tr.classification.to_string(),
    );
    rep.check(
        "barrier-agrees",
        "threshold flags match the barrier picture (2E < f(x0), X(0) < x0)",
        tr.gr1_holds == bar.energy_below_max && tr.gr2_holds == bar.gradient_below_x0,
        format!(
            "gr1 {} / {}, gr2 {} / {}",
            tr.gr1_holds, bar.energy_below_max, tr.gr2_holds, bar.gradient_below_x0
        ),
    );
    let series = evolution::simulate(&u0, p, &c.sim_options())?;
    rep.series_files.push(write_series(dir, "threshold-barrier", &series)?);
    rep.under_resolved = series.under_resolved;
    let worst = series
        .grad_l2
        .iter()
        .zip(&series.mass)
        .map(|(g, m)| invariants::gradient_product(g * g, *m, tr.s_k))
        .fold(0.0, f64::max);
    rep.check(
        "gradient-product-below",
        "||u_x(t)||^{s_k} ||u(t)||^{1-s_k} < ||Q'||^{s_k} ||Q||^{1-s_k} for all t",
        invariants::strictly_below(worst, tr.rhs2),
        format!("max {worst:.6e} vs {:.6e}", tr.rhs2),
    );
    Ok(())
}

fn defocusing_growth(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let sc = Scenario::DefocusingGrowth;
    require(c.mu == -1 && c.k.is_multiple_of(2), sc, "mu = -1 and even k")?;
    let s = c.imethod_s.unwrap_or(c.s_track);
    let p = c.params()?;
    let u0 = c.initial_field()?;
    let mut o = c.sim_options();
    o.s_track = s;
    let series = evolution::simulate(&u0, p, &o)?;
    rep.series_files.push(write_series(dir, "defocusing-growth", &series)?);
    rep.under_resolved = series.under_resolved;
    h1_bound_check(rep, &series);
    let blow = evolution::detect_blowup(&series, evolution::DEFAULT_CAP_FACTOR * series.grad_l2[0].powi(2));
    rep.check("no-blowup", "defocusing even k: no blow-up", blow.is_none(), format!("{blow:?}"));
    let g = imethod::growth_bound_check(&series, c.k, s)?;
    rep.check(
        "growth-slope",
        "empirical growth slope of ||u||^2_{H^s} <= exponent + 0.5",
        g.empirical_slope <= g.exponent + 0.5,
        format!("slope {:.4e}, exponent {:.4e}, C {:.4e}", g.empirical_slope, g.exponent, g.constant),
    );
    Ok(())
}

fn imethod_sweep(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let sc = Scenario::ImethodSweep;
    require(c.mu == -1 && c.k.is_multiple_of(2), sc, "mu = -1 and even k")?;
    require(c.imethod_n_list.len() >= 2, sc, "imethod.N_list with at least two entries")?;
    let s = c.imethod_s.unwrap_or(c.s_track);
    let base = IMethodParams::new(c.imethod_n_list[0], s)?;
    let u0 = c.initial_field()?;
    let mut o = c.sim_options();
    o.s_track = s;
    let r = imethod::almost_conservation_sweep(&u0, c.params()?, &base, &c.imethod_n_list, &o)?;
    let path = dir.join("imethod-sweep.csv");
    std::fs::write(&path, sweep_csv(&r))?;
    rep.series_files.push(path);
    rep.series_files.push(write_series(dir, "imethod-sweep", &r.series)?);
    rep.sweep_slope = Some(r.slope);
    rep.check(
        "sweep-slope",
        "log-log slope of sup|E1(t) - E1(0)| against N <= -1.5",
        r.slope <= -1.5,
        format!("{:.4}", r.slope),
    );
    rep.check(
        "sweep-monotone",
        "increments nonincreasing in N within 10%",
        r.monotone,
        String::new(),
    );
    Ok(())
}

fn gwp_schedule(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let s = c.imethod_s.unwrap_or(c.s_track);
    let sch = imethod::iteration_schedule(c.k, s, c.schedule_t)?;
    let path = dir.join("gwp-schedule.csv");
    std::fs::write(&path, schedule_csv(&sch))?;
    rep.series_files.push(path);
    let reached = (sch.log2_n as f64 * sch.n_exponent).exp2() > sch.t_target;
    let minimal = sch.log2_n == 0 || ((sch.log2_n - 1) as f64 * sch.n_exponent).exp2() <= sch.t_target;
    rep.check(
        "schedule-minimal",
        "N is the smallest power of two with N^{2-eps-3(1-s)/(s-1/2+2/k)} > T",
        reached && minimal,
        format!("log2 N = {}, impractical = {}", sch.log2_n, sch.impractical),
    );
    Ok(())
}

fn resonance(c: &SimConfig, dir: &Path, rep: &mut RunReport) -> Result<()> {
    let s = c.imethod_s.unwrap_or(0.5);
    let p = IMethodParams::new(c.resonance_n, s)?;
    let w = imethod::resonance_search(c.k, &p, c.resonance_budget)?;
    match &w {
        Some(w) => {
            let path = dir.join("resonance_witness.csv");
            std::fs::write(&path, witness_csv(w))?;
            rep.series_files.push(path);
            rep.check(
                "witness",
                "tuple with sum xi = sum xi^3 = 0 (to 1e-10) and |sum m^2 xi^3| normalized > 1e-6",
                w.sum.abs() <= imethod::CONSTRAINT_TOL
                    && w.cube_sum.abs() <= imethod::CONSTRAINT_TOL
                    && w.normalized > imethod::WITNESS_TOL,
                format!("xi = {:?}, normalized = {:.3e}", w.xi, w.normalized),
            );
        }
        None => rep.check("witness", "a resonance witness exists within budget", false, "none found".into()),
    }
    let identity = IMethodParams { n_cut: 1e9, ..p };
    let none = imethod::resonance_search(c.k, &identity, c.resonance_budget.min(1_000_000))?;
    rep.check(
        "identity-no-witness",
        "with m = 1 every admissible tuple has vanishing weighted cube sum",
        none.is_none(),
        String::new(),
    );
    Ok(())
}

/// Runs `jobs` on a pool of `workers` threads. Reports come back in input
/// order; a failing or panicking job yields a report with `error` set and
/// never affects the others.
pub fn sweep(jobs: &[(Scenario, SimConfig)], workers: usize) -> Result<Vec<RunReport>> {
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|(sc, cfg)| {
                let out = std::panic::catch_unwind(|| run_scenario(*sc, cfg));
                match out {
                    Ok(Ok(r)) => r,
                    Ok(Err(e)) => failed_report(*sc, cfg, e.to_string()),
                    Err(_) => failed_report(*sc, cfg, "panicked".into()),
                }
            })
            .collect()
    }))
}

fn failed_report(sc: Scenario, cfg: &SimConfig, msg: String) -> RunReport {
    let mut r = RunReport::new(sc, cfg);
    r.finished_unix = unix_now();
    r.error = Some(msg);
    r
}
