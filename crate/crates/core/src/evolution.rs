//! Time integration of `u_t + u_xxx + mu (u^{k+1})_x = 0` with invariant
//! tracking, exact soliton solutions and blow-up detection.
//!
//! The stepper is the fourth-order exponential Runge-Kutta scheme of
//! Cox-Matthews (ETDRK4). In spectral variables `v_t = L v + N(v)` with
//! `L = i xi^3` treated exactly and `N(v) = -mu i xi (u^{k+1})^` evaluated
//! alias-free. The phi-function coefficients are averaged over a circle of
//! radius one around each `L dt` (Kassam-Trefethen), which avoids
//! cancellation near `xi = 0`.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, IntegrationFailure, Result};
use crate::ground_state;
use crate::imethod::{self, IMethodParams};
use crate::invariants::{self, ModelParams};
use crate::spectral::{self, Field, Grid, PowerWorkspace};

const CONTOUR_POINTS: usize = 32;

/// Spectral mass fraction in the top 10% of modes above which a run is
/// flagged as under-resolved.
pub const RESOLUTION_TOL: f64 = 1e-8;

/// `H^1`-weighted tail fraction above which growth is reported as blow-up.
pub const BLOWUP_TAIL: f64 = 0.01;

/// Default blow-up cap, as a multiple of the initial `||u_x||^2`.
pub const DEFAULT_CAP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub field: Field,
    pub params: ModelParams,
    pub dt: f64,
    pub step_count: u64,
}

/// Modified energy `E(I u)` sampled along a run for one multiplier.
#[derive(Debug, Clone, Serialize)]
pub struct ModifiedEnergyTrack {
    pub params: IMethodParams,
    pub values: Vec<f64>,
}

/// Invariants sampled along a simulation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct InvariantSeries {
    pub s_track: f64,
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// `||u||_{H^s}` at `s = s_track`.
    pub hs_norm: Vec<f64>,
    /// `||u_x||_{L2}`.
    pub grad_l2: Vec<f64>,
    /// Fraction of `sum (1 + |xi|)^2 |u^|^2` in the top 10% of modes.
    pub tail_h1: Vec<f64>,
    /// Fraction of the mass in the top 10% of modes.
    pub tail_mass: Vec<f64>,
    pub modified_energy: Vec<ModifiedEnergyTrack>,
    pub steps: u64,
    /// Set when the run stopped early on detected blow-up.
    pub blowup_time: Option<f64>,
    pub under_resolved: bool,
}

impl InvariantSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn relative_drift(v: &[f64]) -> f64 {
        let v0 = v.first().copied().unwrap_or(0.0);
        let scale = v0.abs().max(1e-12);
        v.iter().map(|x| (x - v0).abs()).fold(0.0, f64::max) / scale
    }

    /// `max_t |M(t) - M(0)| / M(0)`.
    pub fn mass_drift(&self) -> f64 {
        Self::relative_drift(&self.mass)
    }

    /// `max_t |E(t) - E(0)| / max(|E(0)|, 1e-12)`.
    pub fn energy_drift(&self) -> f64 {
        Self::relative_drift(&self.energy)
    }

    /// CSV with header `time,mass,energy,hs_norm,grad_l2[,e1_N<value>...]`,
    /// floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "time,mass,energy,hs_norm,grad_l2")?;
        for tr in &self.modified_energy {
            write!(w, ",e1_N{}", tr.params.n_cut)?;
        }
        writeln!(w)?;
        for i in 0..self.len() {
            write!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], self.mass[i], self.energy[i], self.hs_norm[i], self.grad_l2[i]
            )?;
            for tr in &self.modified_energy {
                write!(w, ",{:.16e}", tr.values[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// ETDRK4 stepper with precomputed coefficients for one grid and step.
pub struct Stepper {
    grid: Grid,
    params: ModelParams,
    dt: f64,
    nonlinear: bool,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
    /// `-mu i xi`, Nyquist zeroed.
    g: Vec<Complex64>,
    ws: PowerWorkspace,
    nv: Vec<Complex64>,
    na: Vec<Complex64>,
    nb: Vec<Complex64>,
    nc: Vec<Complex64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
    pw: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: Grid, params: ModelParams, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(invalid(format!("time step must be positive, got {dt}")));
        }
        let n = grid.n();
        let zero = Complex64::new(0.0, 0.0);
        let mut s = Stepper {
            grid,
            params,
            dt,
            nonlinear: true,
            e: vec![zero; n],
            e2: vec![zero; n],
            q: vec![zero; n],
            f1: vec![zero; n],
            f2: vec![zero; n],
            f3: vec![zero; n],
            g: vec![zero; n],
            ws: PowerWorkspace::new(n, params.k as usize + 1),
            nv: vec![zero; n],
            na: vec![zero; n],
            nb: vec![zero; n],
            nc: vec![zero; n],
            a: vec![zero; n],
            b: vec![zero; n],
            c: vec![zero; n],
            pw: vec![zero; n],
        };
        s.set_coefficients();
        Ok(s)
    }

    /// Drops the nonlinear term, leaving the exact Airy flow.
    pub fn without_nonlinearity(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn set_coefficients(&mut self) {
        let h = self.dt;
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64))
            .collect();
        let mu = self.params.mu as f64;
        let nyq = self.grid.nyquist_index();
        for i in 0..self.grid.n() {
            let xi = self.grid.mode(i) as f64 * self.grid.dxi();
            let lh = Complex64::new(0.0, xi.powi(3) * h);
            self.e[i] = lh.exp();
            self.e2[i] = (lh * 0.5).exp();
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            for r in &roots {
                let z = lh + r;
                let ez = z.exp();
                let ez2 = (z * 0.5).exp();
                let z3 = z * z * z;
                q += (ez2 - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                f2 += (2.0 + z + ez * (z - 2.0)) / z3;
                f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
            let w = h / CONTOUR_POINTS as f64;
            self.q[i] = q * w;
            self.f1[i] = f1 * w;
            self.f2[i] = f2 * w;
            self.f3[i] = f3 * w;
            self.g[i] = if i == nyq {
                Complex64::default()
            } else {
                Complex64::new(0.0, -mu * xi)
            };
        }
    }

    fn nonlinear_term(&mut self, which: Stage) {
        let (src, dst) = match which {
            Stage::V => (&self.pw, &mut self.nv),
            Stage::A => (&self.a, &mut self.na),
            Stage::B => (&self.b, &mut self.nb),
            Stage::C => (&self.c, &mut self.nc),
        };
        if !self.nonlinear {
            dst.iter_mut().for_each(|x| *x = Complex64::default());
            return;
        }
        self.ws.power(src, self.params.k + 1, dst);
        for (d, g) in dst.iter_mut().zip(&self.g) {
            *d *= g;
        }
    }

    /// Advances the FFT-ordered spectrum `v` by one step in place.
    pub fn advance(&mut self, v: &mut [Complex64]) {
        let n = self.grid.n();
        self.pw.copy_from_slice(v);
        self.nonlinear_term(Stage::V);
        for i in 0..n {
            self.a[i] = self.e2[i] * v[i] + self.q[i] * self.nv[i];
        }
        self.nonlinear_term(Stage::A);
        for i in 0..n {
            self.b[i] = self.e2[i] * v[i] + self.q[i] * self.na[i];
        }
        self.nonlinear_term(Stage::B);
        for i in 0..n {
            self.c[i] = self.e2[i] * self.a[i] + self.q[i] * (2.0 * self.nb[i] - self.nv[i]);
        }
        self.nonlinear_term(Stage::C);
        for i in 0..n {
            v[i] = self.e[i] * v[i]
                + self.nv[i] * self.f1[i]
                + 2.0 * (self.na[i] + self.nb[i]) * self.f2[i]
                + self.nc[i] * self.f3[i];
        }
        v[self.grid.nyquist_index()] = Complex64::default();
    }
}

#[derive(Clone, Copy)]
enum Stage {
    V,
    A,
    B,
    C,
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// One ETDRK4 step of size `st.dt`.
pub fn step(st: &SimState) -> Result<SimState> {
    let mut stepper = Stepper::new(*st.field.grid(), st.params, st.dt)?;
    let mut v = st.field.coefficients();
    stepper.advance(&mut v);
    if !all_finite(&v) {
        return Err(Error::IntegrationFailure(Box::new(IntegrationFailure {
            reason: "non-finite spectrum".into(),
            state: st.clone(),
            partial: InvariantSeries::default(),
        })));
    }
    Ok(SimState {
        t: st.t + st.dt,
        field: Field::from_spectrum_unchecked(*st.field.grid(), v),
        params: st.params,
        dt: st.dt,
        step_count: st.step_count + 1,
    })
}

/// Run controls for [`simulate`].
#[derive(Debug, Clone, Serialize)]
pub struct SimOptions {
    pub t_final: f64,
    /// Record invariants every this many steps (and at the final time).
    pub record_every: usize,
    /// Regularity of the tracked `H^s` norm and of the time-scale heuristic.
    pub s_track: f64,
    pub dt_override: Option<f64>,
    /// Multiplies the heuristic step `T_loc / 1000`.
    pub safety: f64,
    /// Blow-up cap on `||u_x||^2`, as a multiple of its initial value.
    pub cap_factor: f64,
    pub imethod: Vec<IMethodParams>,
}

impl SimOptions {
    pub fn new(t_final: f64) -> Self {
        SimOptions {
            t_final,
            record_every: 100,
            s_track: 1.0,
            dt_override: None,
            safety: 1.0,
            cap_factor: DEFAULT_CAP_FACTOR,
            imethod: Vec::new(),
        }
    }
}

/// Nonlinear step limit `0.5 / (max|u|^k xi_max)`.
pub fn nonlinear_cfl(max_abs: f64, k: u32, grid: &Grid) -> f64 {
    let a = max_abs.powi(k as i32) * grid.xi_max();
    if a > 0.0 {
        0.5 / a
    } else {
        f64::INFINITY
    }
}

struct Diagnostics {
    grid: Grid,
    params: ModelParams,
    s_track: f64,
    ws: PowerWorkspace,
    imethod: Vec<IMethodParams>,
    scratch: Vec<Complex64>,
}

impl Diagnostics {
    fn new(grid: Grid, params: ModelParams, s_track: f64, imethod: Vec<IMethodParams>) -> Self {
        Diagnostics {
            grid,
            params,
            s_track,
            ws: PowerWorkspace::new(grid.n(), params.k as usize + 2),
            imethod,
            scratch: vec![Complex64::default(); grid.n()],
        }
    }

    fn energy_of(&mut self, v: &[Complex64]) -> f64 {
        let g2 = spectral::spectral_l2_sq(&self.grid, v, |xi| xi * xi);
        let pot = self.ws.mean_of_power(v, self.params.k + 2) * self.grid.length();
        0.5 * g2 - self.params.mu as f64 / (self.params.k as f64 + 2.0) * pot
    }

    fn record(&mut self, series: &mut InvariantSeries, t: f64, v: &[Complex64]) {
        let g = self.grid;
        let s = self.s_track;
        series.times.push(t);
        series.mass.push(spectral::spectral_l2_sq(&g, v, |_| 1.0));
        let e = self.energy_of(v);
        series.energy.push(e);
        series
            .hs_norm
            .push(spectral::spectral_l2_sq(&g, v, |xi| (1.0 + xi.abs()).powf(2.0 * s)).sqrt());
        series
            .grad_l2
            .push(spectral::spectral_l2_sq(&g, v, |xi| xi * xi).sqrt());
        series
            .tail_h1
            .push(spectral::tail_fraction_weighted(&g, v, |xi| (1.0 + xi.abs()).powi(2)));
        series.tail_mass.push(spectral::tail_fraction(&g, v));
        for (idx, p) in self.imethod.clone().iter().enumerate() {
            for (i, (dst, src)) in self.scratch.iter_mut().zip(v).enumerate() {
                let xi = g.mode(i) as f64 * g.dxi();
                *dst = src * imethod::multiplier_m(xi, p);
            }
            let iv = std::mem::take(&mut self.scratch);
            let e1 = self.energy_of(&iv);
            self.scratch = iv;
            series.modified_energy[idx].values.push(e1);
        }
    }
}

/// Integrates from `initial` to `opts.t_final`, recording invariants.
///
/// The run is split into chunks of the local time scale
/// `T_loc = ||u||_{H^s}^{-3/(s - s_k)}` (at `s = s_track`); inside a chunk the
/// step is `min(safety T_loc / 1000, 0.5 / (max|u|^k xi_max))`, unless
/// `dt_override` fixes it for the whole run. The run stops early, with
/// `blowup_time` set, when [`detect_blowup`] fires.
pub fn simulate(initial: &Field, params: ModelParams, opts: &SimOptions) -> Result<InvariantSeries> {
    run(initial, params, opts).map(|(s, _)| s)
}

fn run(
    initial: &Field,
    params: ModelParams,
    opts: &SimOptions,
) -> Result<(InvariantSeries, Vec<Complex64>)> {
    if !(opts.t_final > 0.0) {
        return Err(invalid(format!("t_final must be positive, got {}", opts.t_final)));
    }
    if opts.record_every == 0 {
        return Err(invalid("record_every must be >= 1"));
    }
    let grid = *initial.grid();
    for p in &opts.imethod {
        p.validate()?;
    }
    // fail early on an inadmissible tracking regularity
    invariants::local_time_from_norm(1.0, opts.s_track, params.k)?;

    let mut series = InvariantSeries {
        s_track: opts.s_track,
        modified_energy: opts
            .imethod
            .iter()
            .map(|p| ModifiedEnergyTrack {
                params: *p,
                values: Vec::new(),
            })
            .collect(),
        ..Default::default()
    };
    let mut diag = Diagnostics::new(grid, params, opts.s_track, opts.imethod.clone());
    let mut v = initial.coefficients();
    let mut t = 0.0;
    let mut steps: u64 = 0;
    diag.record(&mut series, t, &v);
    let cap = opts.cap_factor * series.grad_l2[0].powi(2).max(f64::MIN_POSITIVE);

    let mut stepper: Option<Stepper> = None;
    let mut since_record = 0usize;
    let mut warned = false;

    while t < opts.t_final {
        let remaining = opts.t_final - t;
        let (chunk, dt) = match opts.dt_override {
            Some(dt) => {
                let n_steps = (remaining / dt).round().max(1.0);
                (remaining, remaining / n_steps)
            }
            None => {
                let u_norm =
                    spectral::spectral_l2_sq(&grid, &v, |xi| (1.0 + xi.abs()).powf(2.0 * opts.s_track))
                        .sqrt();
                let t_loc = invariants::local_time_from_norm(u_norm, opts.s_track, params.k)?;
                let max_abs = Field::from_spectrum_unchecked(grid, v.clone()).max_abs();
                let chunk = t_loc.min(remaining);
                let mut dt = (opts.safety * t_loc / 1000.0).min(nonlinear_cfl(max_abs, params.k, &grid));
                if !dt.is_finite() {
                    dt = chunk / 1000.0;
                }
                let n_steps = (chunk / dt).ceil().max(1.0);
                (chunk, chunk / n_steps)
            }
        };
        let n_steps = (chunk / dt).round() as u64;
        let reuse = stepper.as_ref().is_some_and(|s| s.dt() == dt);
        if !reuse {
            stepper = Some(Stepper::new(grid, params, dt)?);
        }
        let st = stepper.as_mut().expect("stepper set above");
        let t_chunk0 = t;
        for i in 1..=n_steps {
            let prev = v.clone();
            st.advance(&mut v);
            if !all_finite(&v) {
                return Err(Error::IntegrationFailure(Box::new(IntegrationFailure {
                    reason: "non-finite spectrum".into(),
                    state: SimState {
                        t,
                        field: Field::from_spectrum_unchecked(grid, prev),
                        params,
                        dt,
                        step_count: steps,
                    },
                    partial: series,
                })));
            }
            steps += 1;
            t = if i == n_steps { t_chunk0 + chunk } else { t_chunk0 + i as f64 * dt };
            since_record += 1;
            let last = i == n_steps && t >= opts.t_final;
            if since_record == opts.record_every || last {
                since_record = 0;
                diag.record(&mut series, t, &v);
                let j = series.len() - 1;
                if series.tail_mass[j] > RESOLUTION_TOL {
                    series.under_resolved = true;
                    if !warned {
                        log::warn!(
                            "under-resolved: spectral tail carries {:.2e} of the mass at t = {t}",
                            series.tail_mass[j]
                        );
                        warned = true;
                    }
                }
                if let Some(tb) = detect_blowup(&series, cap) {
                    series.blowup_time = Some(tb);
                    series.steps = steps;
                    return Ok((series, v));
                }
            }
        }
    }
    series.steps = steps;
    Ok((series, v))
}

/// Integrates and also returns the final field (at the blow-up time when the
/// run stopped early).
pub fn simulate_to_state(
    initial: &Field,
    params: ModelParams,
    opts: &SimOptions,
) -> Result<(InvariantSeries, Field)> {
    let (series, v) = run(initial, params, opts)?;
    Ok((series, Field::from_spectrum_unchecked(*initial.grid(), v)))
}

/// First recorded time at which `||u_x||^2 > cap`, or at which the top 10%
/// of modes carry more than 1% of the `H^1` mass.
pub fn detect_blowup(series: &InvariantSeries, cap: f64) -> Option<f64> {
    (0..series.len())
        .find(|&i| {
            series.grad_l2[i].powi(2) > cap
                || series.tail_h1.get(i).is_some_and(|&f| f > BLOWUP_TAIL)
        })
        .map(|i| series.times[i])
}

/// Exact traveling wave `c^{1/k} Q(sqrt(c) (x - c t - x0))` of the focusing
/// equation, wrapped onto the periodic domain.
pub fn soliton(k: u32, c: f64, x0: f64, grid: &Grid, t: f64) -> Result<Field> {
    if !(c > 0.0) {
        return Err(invalid(format!("soliton speed must be positive, got {c}")));
    }
    let amp = c.powf(1.0 / k as f64);
    let edge = amp * ground_state::q_closed(k, c.sqrt() * 0.5 * grid.length());
    if edge >= ground_state::EDGE_TOL {
        return Err(Error::DomainTooShort(format!(
            "soliton is {edge:.3e} at the domain edge; increase L"
        )));
    }
    let l = grid.length();
    let shift = x0 + c * t;
    Ok(Field::from_fn(*grid, |x| {
        let y = (x - shift + 0.5 * l).rem_euclid(l) - 0.5 * l;
        amp * ground_state::q_closed(k, c.sqrt() * y)
    }))
}

/// Writes a spectral checkpoint: `#`-prefixed metadata lines, a `re,im`
/// header, then one coefficient per line in FFT order (unnormalized forward
/// transform).
pub fn write_checkpoint<W: Write>(mut w: W, st: &SimState) -> std::io::Result<()> {
    let g = st.field.grid();
    writeln!(w, "# n = {}", g.n())?;
    writeln!(w, "# length = {:.16e}", g.length())?;
    writeln!(w, "# t = {:.16e}", st.t)?;
    writeln!(w, "# k = {}", st.params.k)?;
    writeln!(w, "# mu = {}", st.params.mu)?;
    writeln!(w, "re,im")?;
    for c in st.field.coefficients() {
        writeln!(w, "{:.16e},{:.16e}", c.re, c.im)?;
    }
    Ok(())
}

/// Checkpoint contents.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub t: f64,
    pub field: Field,
    pub params: Option<ModelParams>,
}

pub fn read_checkpoint<R: BufRead>(r: R) -> Result<Checkpoint> {
    let mut n = None;
    let mut length = None;
    let mut t = 0.0;
    let mut k = None;
    let mut mu = None;
    let mut coeffs = Vec::new();
    let bad = |l: &str| Error::Config(format!("malformed checkpoint line: {l}"));
    for line in r.lines() {
        let line = line?;
        let l = line.trim();
        if l.is_empty() || l == "re,im" {
            continue;
        }
        if let Some(meta) = l.strip_prefix('#') {
            let Some((key, val)) = meta.split_once('=') else {
                continue;
            };
            let val = val.trim();
            match key.trim() {
                "n" => n = Some(val.parse::<usize>().map_err(|_| bad(l))?),
                "length" => length = Some(val.parse::<f64>().map_err(|_| bad(l))?),
                "t" => t = val.parse().map_err(|_| bad(l))?,
                "k" => k = Some(val.parse::<u32>().map_err(|_| bad(l))?),
                "mu" => mu = Some(val.parse::<i8>().map_err(|_| bad(l))?),
                _ => {}
            }
            continue;
        }
        let (re, im) = l.split_once(',').ok_or_else(|| bad(l))?;
        coeffs.push(Complex64::new(
            re.trim().parse().map_err(|_| bad(l))?,
            im.trim().parse().map_err(|_| bad(l))?,
        ));
    }
    let grid = Grid::new(
        n.ok_or_else(|| Error::Config("checkpoint lacks '# n'".into()))?,
        length.ok_or_else(|| Error::Config("checkpoint lacks '# length'".into()))?,
    )?;
    let field = Field::from_coefficients(grid, &coeffs)?;
    let params = match (k, mu) {
        (Some(k), Some(mu)) => Some(ModelParams::new(k, mu)?),
        _ => None,
    };
    Ok(Checkpoint { t, field, params })
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let f = std::fs::File::open(path)?;
    read_checkpoint(std::io::BufReader::new(f))
}
