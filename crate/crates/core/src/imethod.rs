//! The I-operator, the modified energy `E(Iu)`, and the quantitative side of
//! the I-method: almost-conservation sweeps, resonance witnesses, and the
//! rescaling/iteration schedule.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::evolution::{self, InvariantSeries, SimOptions};
use crate::invariants::{self, ModelParams};
use crate::spectral::{self, Field};

/// Interpolation on the transition band `N < |xi| < 2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Blend {
    /// `log m = -(1 - s) h(t) log(|xi|/N)` with `t = log2(|xi|/N)` and
    /// `h(t) = t^2 (3 - 2t)`.
    #[default]
    LogSmoothstep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IMethodParams {
    /// Frequency threshold `N`.
    pub n_cut: f64,
    pub s: f64,
    pub blend: Blend,
}

impl IMethodParams {
    pub fn new(n_cut: f64, s: f64) -> Result<Self> {
        let p = IMethodParams { n_cut, s, blend: Blend::LogSmoothstep };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_cut >= 1.0) || !self.n_cut.is_finite() {
            return Err(invalid(format!("N must be >= 1, got {}", self.n_cut)));
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(invalid(format!("s must lie in (0, 1], got {}", self.s)));
        }
        Ok(())
    }
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// The symbol `m_N(xi)`: 1 below `N`, `(N/|xi|)^{1-s}` above `2N`.
pub fn multiplier_m(xi: f64, p: &IMethodParams) -> f64 {
    let a = xi.abs();
    if a <= p.n_cut {
        return 1.0;
    }
    let u = (a / p.n_cut).ln();
    if a >= 2.0 * p.n_cut {
        return (-(1.0 - p.s) * u).exp();
    }
    match p.blend {
        Blend::LogSmoothstep => (-(1.0 - p.s) * smoothstep(u / LN_2) * u).exp(),
    }
}

/// Smallest `C` with `m(xi) <xi>^{1-s} <= C N^{1-s}` for all `xi`, where
/// `<xi> = 1 + |xi|`. It exceeds 1: the bracket adds `(1 + 1/N)^{1-s}` and
/// the blend lies above the power law inside the band.
pub fn sandwich_constant(p: &IMethodParams) -> f64 {
    // t (1 - h(t)) peaks where 8t^3 - 9t^2 + 1 = (t - 1)(8t^2 - t - 1) = 0
    let t = (1.0 + 33f64.sqrt()) / 16.0;
    let band = ((1.0 - p.s) * LN_2 * t * (1.0 - smoothstep(t))).exp();
    (1.0 + 1.0 / p.n_cut).powf(1.0 - p.s) * band
}

/// `I f`, the Fourier multiplier with symbol `m`.
pub fn apply_i(f: &Field, p: &IMethodParams) -> Field {
    f.apply_symbol(|xi| multiplier_m(xi, p))
}

/// Both evaluations of `E(Iu)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModifiedEnergy {
    /// `E` of the physical field `I f`: trapezoid sum of `(I f)_x^2` and the
    /// padded-grid integral of `(I f)^{k+2}`.
    pub physical: f64,
    /// `1/2 sum xi^2 m^2 |f^|^2` plus the alias-free convolution of
    /// `m f^`, evaluated without leaving spectral space.
    pub spectral: f64,
}

pub fn modified_energy_paths(f: &Field, p: &IMethodParams, mp: ModelParams) -> ModifiedEnergy {
    let k = mp.k;
    let mu = mp.mu as f64;
    let g = *f.grid();

    let iu = apply_i(f, p);
    let ix = iu.derivative(1);
    let grad = g.dx() * ix.values().iter().map(|v| v * v).sum::<f64>();
    let pot = spectral::integral_of_power(&iu, k + 2);
    let physical = 0.5 * grad - mu / (k as f64 + 2.0) * pot;

    let c = f.coefficients();
    let weighted: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(i, &z)| z * multiplier_m(g.mode(i) as f64 * g.dxi(), p))
        .collect();
    let lam2 = spectral::spectral_l2_sq(&g, &c, |xi| {
        let m = multiplier_m(xi, p);
        xi * xi * m * m
    });
    let mut ws = spectral::PowerWorkspace::new(g.n(), k as usize + 2);
    let lamk = ws.mean_of_power(&weighted, k + 2) * g.length();
    let spectral = 0.5 * lam2 - mu / (k as f64 + 2.0) * lamk;
    ModifiedEnergy { physical, spectral }
}

/// `E^1(f) = E(I f)` (spectral evaluation).
pub fn modified_energy(f: &Field, p: &IMethodParams, mp: ModelParams) -> f64 {
    modified_energy_paths(f, p, mp).spectral
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub n_cut: f64,
    /// `sup_t |E^1(t) - E^1(0)|`.
    pub sup_increment: f64,
    pub final_e1: f64,
    pub resolved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Least-squares slope of `log(sup_increment)` against `log N`.
    pub slope: f64,
    pub intercept: f64,
    /// Increments nonincreasing in `N` up to a 10% tolerance.
    pub monotone: bool,
    pub series: InvariantSeries,
}

/// Least-squares line `y = slope x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Measures `sup_t |E^1(t) - E^1(0)|` for each `N` in `n_list` along one
/// defocusing run and fits the log-log decay rate.
///
/// The flow does not depend on `N`, so a single simulation records the
/// modified energy for every threshold at once.
pub fn almost_conservation_sweep(
    initial: &Field,
    mp: ModelParams,
    p_base: &IMethodParams,
    n_list: &[f64],
    opts: &SimOptions,
) -> Result<SweepResult> {
    if mp.mu != -1 || !mp.k.is_multiple_of(2) {
        return Err(Error::OutOfScope(
            "almost conservation is measured for the defocusing equation with even k".into(),
        ));
    }
    if n_list.len() < 2 {
        return Err(invalid("need at least two thresholds for a slope"));
    }
    let xi_max = initial.grid().xi_max();
    let params = n_list
        .iter()
        .map(|&n| {
            if n > xi_max / 4.0 && n < xi_max {
                return Err(invalid(format!(
                    "N = {n} leaves no resolved transition band (xi_max = {xi_max})"
                )));
            }
            IMethodParams::new(n, p_base.s).map(|p| IMethodParams { blend: p_base.blend, ..p })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut o = opts.clone();
    o.imethod = params;
    let series = evolution::simulate(initial, mp, &o)?;
    if series.under_resolved {
        return Err(Error::UnderResolved(
            "spectral tail exceeded the resolution tolerance; the sweep is invalid".into(),
        ));
    }
    let points: Vec<SweepPoint> = series
        .modified_energy
        .iter()
        .map(|tr| {
            let e0 = tr.values[0];
            SweepPoint {
                n_cut: tr.params.n_cut,
                sup_increment: tr.values.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max),
                final_e1: *tr.values.last().expect("nonempty"),
                resolved: !series.under_resolved,
            }
        })
        .collect();
    let lx: Vec<f64> = points.iter().map(|p| p.n_cut.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.sup_increment.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, intercept) = fit_line(&lx, &ly);
    let mut sorted: Vec<&SweepPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.n_cut.total_cmp(&b.n_cut));
    let monotone = sorted
        .windows(2)
        .all(|w| w[1].sup_increment <= 1.1 * w[0].sup_increment);
    Ok(SweepResult { points, slope, intercept, monotone, series })
}

/// A tuple with `sum xi = sum xi^3 = 0` but `sum m^2 xi^3 != 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ResonanceWitness {
    pub xi: Vec<f64>,
    pub sum: f64,
    pub cube_sum: f64,
    pub weighted_cube_sum: f64,
    /// `|sum m^2 xi^3| / sum m^2 |xi|^3`.
    pub normalized: f64,
    pub candidates_tried: u64,
}

/// Minimum normalized weighted cube sum for a witness.
pub const WITNESS_TOL: f64 = 1e-6;
/// Absolute tolerance on both constraint sums.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Searches `(k + 2)`-tuples of reals for a resonance witness.
///
/// The first `k` coordinates take magnitudes `a >= b` on the integer grid
/// `1..=4N` with every sign/count pattern; the last two solve
/// `x + y = P`, `x^3 + y^3 = -S3` exactly, i.e. `xy = (P^3 + S3) / (3P)`.
/// Candidates are visited in order of increasing `a`; at most `budget` are
/// tried.
pub fn resonance_search(k: u32, p: &IMethodParams, budget: u64) -> Result<Option<ResonanceWitness>> {
    if k < 1 {
        return Err(invalid("k must be >= 1"));
    }
    p.validate()?;
    let k = k as i64;
    let max_mag = (4.0 * p.n_cut).ceil().min(1e9) as i64;
    let mut tried: u64 = 0;
    for a in 1..=max_mag {
        for b in 1..=a {
            for ja in 1..=k {
                let jb = k - ja;
                for na in 0..=ja {
                    for nb in 0..=jb {
                        if tried >= budget {
                            return Ok(None);
                        }
                        tried += 1;
                        let (af, bf) = (a as f64, b as f64);
                        let ca = (ja - 2 * na) as f64;
                        let cb = (jb - 2 * nb) as f64;
                        let pf = -(af * ca + bf * cb);
                        let s3 = af.powi(3) * ca + bf.powi(3) * cb;
                        if pf == 0.0 {
                            continue;
                        }
                        let q = (pf.powi(3) + s3) / (3.0 * pf);
                        let disc = pf * pf - 4.0 * q;
                        if disc < 0.0 {
                            continue;
                        }
                        let r = disc.sqrt();
                        let x = 0.5 * (pf + r);
                        let y = 0.5 * (pf - r);
                        let mut xi = Vec::with_capacity(k as usize + 2);
                        xi.extend(std::iter::repeat_n(af, (ja - na) as usize));
                        xi.extend(std::iter::repeat_n(-af, na as usize));
                        xi.extend(std::iter::repeat_n(bf, (jb - nb) as usize));
                        xi.extend(std::iter::repeat_n(-bf, nb as usize));
                        xi.push(x);
                        xi.push(y);
                        if let Some(w) = check_witness(&xi, p, tried) {
                            return Ok(Some(w));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_witness(xi: &[f64], p: &IMethodParams, tried: u64) -> Option<ResonanceWitness> {
    let sum: f64 = xi.iter().sum();
    let cube_sum: f64 = xi.iter().map(|x| x.powi(3)).sum();
    if sum.abs() > CONSTRAINT_TOL || cube_sum.abs() > CONSTRAINT_TOL {
        return None;
    }
    let m2 = |x: f64| multiplier_m(x, p).powi(2);
    let weighted: f64 = xi.iter().map(|&x| m2(x) * x.powi(3)).sum();
    let scale: f64 = xi.iter().map(|&x| m2(x) * x.abs().powi(3)).sum();
    let normalized = weighted.abs() / scale;
    (normalized > WITNESS_TOL).then(|| ResonanceWitness {
        xi: xi.to_vec(),
        sum,
        cube_sum,
        weighted_cube_sum: weighted,
        normalized,
        candidates_tried: tried,
    })
}

/// Iteration schedule of the global argument for time `T`.
#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub k: u32,
    pub s: f64,
    pub t_target: f64,
    /// `(1 - s) / (s - 1/2 + 2/k)`.
    pub lambda_exponent: f64,
    /// `2 - eps - 3 lambda_exponent`.
    pub n_exponent: f64,
    pub log2_n: u32,
    /// `2^log2_n` (infinite when it overflows).
    pub n: f64,
    pub lambda: f64,
    /// `ceil(N^{2 - eps})`.
    pub iterations: f64,
    /// Length of one iteration in rescaled time.
    pub chunk_time: f64,
    pub impractical: bool,
}

pub const SCHEDULE_EPS: f64 = 0.01;
/// Thresholds beyond `2^20` are flagged impractical.
pub const PRACTICAL_LOG2_N: u32 = 20;

/// Smallest power-of-two `N` with `N^{2 - eps - 3(1-s)/(s - 1/2 + 2/k)} > T`.
pub fn iteration_schedule(k: u32, s: f64, t: f64) -> Result<Schedule> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::OutOfScope(format!(
            "the global argument covers the defocusing equation with even k, got k = {k}"
        )));
    }
    let thr = invariants::gwp_threshold(k);
    if !(s > thr) || s > 1.0 {
        return Err(Error::OutOfScope(format!(
            "global well-posedness below H^1 needs 4(k-1)/(5k) = {thr} < s <= 1, got s = {s}"
        )));
    }
    if !(t > 0.0) {
        return Err(invalid(format!("T must be positive, got {t}")));
    }
    let kf = k as f64;
    let a = (1.0 - s) / (s - 0.5 + 2.0 / kf);
    let b = 2.0 - SCHEDULE_EPS - 3.0 * a;
    if b <= 0.0 {
        return Err(Error::OutOfScope(format!("N exponent {b} is not positive")));
    }
    // N^b > T  <=>  log2 N > log2(T) / b
    let bound = t.log2() / b;
    let log2_n = if bound < 0.0 { 0 } else { (bound.floor() + 1.0) as u32 };
    let n = 2f64.powi(log2_n as i32);
    Ok(Schedule {
        k,
        s,
        t_target: t,
        lambda_exponent: a,
        n_exponent: b,
        log2_n,
        n,
        lambda: (log2_n as f64 * a).exp2(),
        iterations: (log2_n as f64 * (2.0 - SCHEDULE_EPS)).exp2().ceil(),
        chunk_time: 1.0,
        impractical: log2_n > PRACTICAL_LOG2_N,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub k: u32,
    pub s: f64,
    /// Polynomial growth exponent of the `H^s` bound.
    pub exponent: f64,
    /// Smallest `C` with `||u(t)||^2_{H^s} <= C (1 + t)^{exponent + 0.01}`.
    pub constant: f64,
    /// Least-squares slope of `log ||u||^2_{H^s}` against `log(1 + t)`.
    pub empirical_slope: f64,
}

pub fn growth_bound_check(series: &InvariantSeries, k: u32, s: f64) -> Result<GrowthReport> {
    if (series.s_track - s).abs() > 1e-12 {
        return Err(invalid(format!(
            "series tracks H^{} but the check asks for H^{s}",
            series.s_track
        )));
    }
    if series.is_empty() {
        return Err(invalid("empty series"));
    }
    let exponent = invariants::growth_exponent(k, s)?;
    let lt: Vec<f64> = series.times.iter().map(|t| (1.0 + t).ln()).collect();
    let ln: Vec<f64> = series.hs_norm.iter().map(|h| 2.0 * h.ln()).collect();
    let constant = lt
        .iter()
        .zip(&ln)
        .map(|(t, n)| (n - (exponent + 0.01) * t).exp())
        .fold(0.0, f64::max);
    let empirical_slope = if series.len() > 1 { fit_line(&lt, &ln).0 } else { 0.0 };
    Ok(GrowthReport { k, s, exponent, constant, empirical_slope })
}
