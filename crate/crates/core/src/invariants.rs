//! Conserved functionals, the scale-invariant threshold quantities for
//! global existence in the energy space, the barrier function behind them,
//! the scaling group and the table of critical exponents.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ground_state::{self, kopt_golden};
use crate::spectral::{self, Field, Grid};

/// Threshold experiments expect the data to have decayed below this at the
/// domain edge.
pub const EDGE_DECAY: f64 = 1e-10;

/// Strict threshold inequalities `lhs < rhs` are decided as
/// `lhs < rhs (1 - STRICT_MARGIN)` so that quadrature round-off cannot turn an
/// equality case into a pass.
pub const STRICT_MARGIN: f64 = 1e-10;

/// Power `k` and sign `mu` of `u_t + u_xxx + mu (u^{k+1})_x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    pub k: u32,
    pub mu: i8,
}

impl ModelParams {
    pub fn new(k: u32, mu: i8) -> Result<Self> {
        if k < 1 {
            return Err(invalid("k must be >= 1"));
        }
        if mu != 1 && mu != -1 {
            return Err(invalid(format!("mu must be +1 or -1, got {mu}")));
        }
        Ok(ModelParams { k, mu })
    }

    pub fn focusing(k: u32) -> Self {
        ModelParams { k, mu: 1 }
    }

    pub fn defocusing(k: u32) -> Self {
        ModelParams { k, mu: -1 }
    }

    /// Whether the potential energy is sign-definite with the gradient term,
    /// which yields `||u_x||^2 <= 2 E`.
    pub fn has_coercive_energy(&self) -> bool {
        self.mu == -1 && self.k % 2 == 0
    }
}

fn require_theorem_k(k: u32) -> Result<()> {
    if k < 5 {
        return Err(Error::OutOfScope(format!(
            "threshold quantities need k > 4 (got k = {k})"
        )));
    }
    Ok(())
}

/// Critical regularity `s_k = (k - 4) / (2k)`.
pub fn critical_index(k: u32) -> f64 {
    (k as f64 - 4.0) / (2.0 * k as f64)
}

/// `M(u) = int u^2`.
pub fn mass(f: &Field) -> f64 {
    f.l2_norm().powi(2)
}

/// `||u_x||_2^2`.
pub fn grad_sq(f: &Field) -> f64 {
    spectral::homogeneous_sobolev_norm(f, 1.0).powi(2)
}

/// `E(u) = 1/2 int u_x^2 - mu / (k + 2) int u^{k+2}`.
pub fn energy(f: &Field, p: ModelParams) -> f64 {
    let pot = spectral::integral_of_power(f, p.k + 2);
    0.5 * grad_sq(f) - p.mu as f64 / (p.k as f64 + 2.0) * pot
}

/// `sign(x) |x|^a`, with `0^a = 0`.
fn signed_pow(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(a)
    }
}

/// `lhs < rhs` with a relative margin of [`STRICT_MARGIN`], so that quadrature
/// round-off at equality does not count as strict.
pub fn strictly_below(lhs: f64, rhs: f64) -> bool {
    lhs < rhs - STRICT_MARGIN * rhs.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    TheoremApplies,
    NotCovered,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::TheoremApplies => "theorem-applies",
            Classification::NotCovered => "not-covered",
        })
    }
}

/// Scale-invariant size conditions for global `H^1` existence in the
/// focusing problem, evaluated for initial data `u0`.
///
/// `lhs1` uses the signed power `sign(E)|E|^{s_k}` so that the comparison
/// stays monotone in `E`; the separate `energy_nonneg` flag carries `E >= 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdReport {
    pub k: u32,
    pub s_k: f64,
    pub mass: f64,
    pub energy: f64,
    pub lhs1: f64,
    pub rhs1: f64,
    pub lhs2: f64,
    pub rhs2: f64,
    pub gr1_holds: bool,
    pub gr2_holds: bool,
    pub energy_nonneg: bool,
    pub classification: Classification,
}

/// `||u_x||^{s_k} ||u||^{1 - s_k}` from squared norms.
pub fn gradient_product(grad_sq: f64, mass: f64, s_k: f64) -> f64 {
    signed_pow(grad_sq.sqrt(), s_k) * signed_pow(mass.sqrt(), 1.0 - s_k)
}

/// `E^{s_k} M^{1 - s_k}` (signed in `E`).
pub fn energy_product(energy: f64, mass: f64, s_k: f64) -> f64 {
    signed_pow(energy, s_k) * signed_pow(mass, 1.0 - s_k)
}

/// Right-hand side `||Q'||^{s_k} ||Q||^{1 - s_k}` of the gradient threshold.
pub fn ground_state_gradient_product(k: u32) -> Result<f64> {
    require_theorem_k(k)?;
    let q = ground_state::golden(k)?;
    Ok(gradient_product(q.grad_sq, q.mass, critical_index(k)))
}

fn warn_if_not_decayed(f: &Field) {
    let edge = f.edge_magnitude(1);
    if edge > EDGE_DECAY {
        log::warn!(
            "data is {edge:.2e} at the domain edge (> {EDGE_DECAY:e}); the periodic domain may not model the line"
        );
    }
}

pub fn threshold_report(f: &Field, k: u32) -> Result<ThresholdReport> {
    require_theorem_k(k)?;
    warn_if_not_decayed(f);
    let q = ground_state::golden(k)?;
    let s_k = critical_index(k);
    let m = mass(f);
    let e = energy(f, ModelParams::focusing(k));
    let g = grad_sq(f);
    let lhs1 = energy_product(e, m, s_k);
    let rhs1 = energy_product(q.energy, q.mass, s_k);
    let lhs2 = gradient_product(g, m, s_k);
    let rhs2 = gradient_product(q.grad_sq, q.mass, s_k);
    let gr1_holds = strictly_below(lhs1, rhs1);
    let gr2_holds = strictly_below(lhs2, rhs2);
    let energy_nonneg = e >= 0.0;
    let classification = if gr1_holds && gr2_holds && energy_nonneg {
        Classification::TheoremApplies
    } else {
        Classification::NotCovered
    };
    Ok(ThresholdReport {
        k,
        s_k,
        mass: m,
        energy: e,
        lhs1,
        rhs1,
        lhs2,
        rhs2,
        gr1_holds,
        gr2_holds,
        energy_nonneg,
        classification,
    })
}

/// Barrier construction: with `X = ||u_x||^2`, the sharp
/// Gagliardo-Nirenberg inequality gives `X - B X^{k/4} <= A`, and
/// `f(x) = x - B x^{k/4}` has its maximum at `x0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BarrierData {
    pub k: u32,
    /// `2 E(u0)`
    pub a: f64,
    /// `(2 / (k + 2)) K_opt^{k+2} ||u0||^{(k+4)/2}`
    pub b: f64,
    pub x0: f64,
    /// `f(x0) = ((k - 4) / k) x0`
    pub fx0: f64,
    /// `X(0) = ||u0_x||^2`
    pub x_initial: f64,
    /// `2 E(u0) < f(x0)`
    pub energy_below_max: bool,
    /// `X(0) < x0`
    pub gradient_below_x0: bool,
}

impl BarrierData {
    pub fn f(&self, x: f64) -> f64 {
        x - self.b * x.powf(0.25 * self.k as f64)
    }

    pub fn df(&self, x: f64) -> f64 {
        let q = 0.25 * self.k as f64;
        1.0 - self.b * q * x.powf(q - 1.0)
    }

    pub fn d2f(&self, x: f64) -> f64 {
        let q = 0.25 * self.k as f64;
        -self.b * q * (q - 1.0) * x.powf(q - 2.0)
    }
}

pub fn barrier(f: &Field, k: u32) -> Result<BarrierData> {
    require_theorem_k(k)?;
    if f.is_zero() {
        return Err(Error::ZeroField);
    }
    let kf = k as f64;
    let kopt = kopt_golden(k)?;
    let m = mass(f);
    let a = 2.0 * energy(f, ModelParams::focusing(k));
    let b = 2.0 / (kf + 2.0) * kopt * m.powf((kf + 4.0) / 4.0);
    let x0 = (4.0 / (kf * b)).powf(4.0 / (kf - 4.0));
    let fx0 = (kf - 4.0) / kf * x0;
    let x_initial = grad_sq(f);
    Ok(BarrierData {
        k,
        a,
        b,
        x0,
        fx0,
        x_initial,
        energy_below_max: strictly_below(a, fx0),
        gradient_below_x0: strictly_below(x_initial, x0),
    })
}

/// Exponent `theta = k / (2 (k + 2))` in
/// `||u||_{k+2} <= K_opt ||u_x||^theta ||u||^{1 - theta}`.
pub fn gn_theta(k: u32) -> f64 {
    k as f64 / (2.0 * (k as f64 + 2.0))
}

/// Both sides of `int |u|^{k+2} <= K_opt^{k+2} ||u||^{(k+4)/2} ||u_x||^{k/2}`.
pub fn gn_bound(f: &Field, k: u32) -> Result<(f64, f64)> {
    let kf = k as f64;
    let kopt = kopt_golden(k)?;
    let lhs = f.values().iter().map(|v| v.abs().powi(k as i32 + 2)).sum::<f64>() * f.grid().dx();
    let rhs = kopt * mass(f).powf((kf + 4.0) / 4.0) * grad_sq(f).powf(kf / 4.0);
    Ok((lhs, rhs))
}

/// Closed-form initial data families that can be rescaled analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `amplitude exp(-(x - center)^2 / (2 width^2))`
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    /// `amplitude Q_k(dilation x)`
    ScaledGroundState { k: u32, amplitude: f64, dilation: f64 },
}

impl ClosedForm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::Gaussian {
                amplitude,
                width,
                center,
            } => amplitude * (-0.5 * ((x - center) / width).powi(2)).exp(),
            ClosedForm::ScaledGroundState {
                k,
                amplitude,
                dilation,
            } => amplitude * ground_state::q_closed(k, dilation * x),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Field {
        Field::from_fn(*grid, |x| self.eval(x))
    }

    /// `lambda^{2/k} u(lambda x)` for the power `k` of the equation.
    pub fn rescaled(&self, lambda: f64, k: u32) -> Result<ClosedForm> {
        check_lambda(lambda)?;
        let amp = lambda.powf(2.0 / k as f64);
        Ok(match *self {
            ClosedForm::Gaussian {
                amplitude,
                width,
                center,
            } => ClosedForm::Gaussian {
                amplitude: amplitude * amp,
                width: width / lambda,
                center: center / lambda,
            },
            ClosedForm::ScaledGroundState {
                k: kq,
                amplitude,
                dilation,
            } => ClosedForm::ScaledGroundState {
                k: kq,
                amplitude: amplitude * amp,
                dilation: dilation * lambda,
            },
        })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("scaling parameter must be positive, got {lambda}")));
    }
    Ok(())
}

/// Result of rescaling a sampled field.
#[derive(Debug, Clone)]
pub struct Rescaled {
    pub field: Field,
    /// Estimated sup-norm error: magnitude of the rescaled field at the
    /// domain edge plus the spectral tail left after compression.
    pub accuracy: f64,
}

/// `lambda^{2/k} f(lambda x)` for a sampled field, by evaluating the
/// band-limited interpolant of `f` at `lambda x_m`. Points mapped outside the
/// domain are set to zero. Use [`ClosedForm::rescaled`] when an analytic
/// family is available.
pub fn rescale(f: &Field, lambda: f64, k: u32) -> Result<Rescaled> {
    check_lambda(lambda)?;
    let g = *f.grid();
    if lambda == 1.0 {
        return Ok(Rescaled {
            field: f.clone(),
            accuracy: 0.0,
        });
    }
    let c = f.coefficients();
    let n = g.n();
    let half_len = 0.5 * g.length();
    let amp = lambda.powf(2.0 / k as f64);
    let values: Vec<f64> = g
        .points()
        .iter()
        .map(|&x| {
            let y = lambda * x;
            if y < -half_len || y >= half_len {
                return 0.0;
            }
            // trigonometric interpolant, Nyquist mode as a cosine
            let t = y + half_len;
            let mut acc = 0.0;
            for (i, ci) in c.iter().enumerate() {
                let j = g.mode(i);
                let xi = j as f64 * g.dxi();
                if i == g.nyquist_index() {
                    acc += ci.re * (xi * t).cos();
                } else {
                    let (s, co) = (xi * t).sin_cos();
                    acc += ci.re * co - ci.im * s;
                }
            }
            amp * acc / n as f64
        })
        .collect();
    let field = Field::new(g, values)?;
    let tail = spectral::tail_fraction(&g, &field.coefficients()).sqrt() * field.max_abs();
    let accuracy = f.edge_magnitude(1) * amp + tail;
    if accuracy > 1e-8 {
        log::warn!("sampled rescale by {lambda} has estimated error {accuracy:.2e}");
    }
    Ok(Rescaled { field, accuracy })
}

/// Critical exponents and admissible-pair data for a given `k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentTable {
    pub k: u32,
    pub s: Option<f64>,
    pub s_k: f64,
    pub alpha_k: f64,
    pub beta_k: f64,
    /// `(s - s_k) / 3`, present when `s` was given.
    pub gamma_k: Option<f64>,
    pub p_k: f64,
    pub q_k: f64,
    /// `4 (k - 1) / (5k)`
    pub gwp_threshold: f64,
    /// Present when `s` was given and exceeds `gwp_threshold`.
    pub growth_exponent: Option<f64>,
}

pub fn gwp_threshold(k: u32) -> f64 {
    4.0 * (k as f64 - 1.0) / (5.0 * k as f64)
}

/// `(1 + 4/k)(1 - s) / (5 s - 4 (k - 1) / k)`, the polynomial growth rate of
/// `||u(t)||_{H^s}^2`.
pub fn growth_exponent(k: u32, s: f64) -> Result<f64> {
    require_theorem_k(k)?;
    let kf = k as f64;
    let thr = gwp_threshold(k);
    if !(s > thr) {
        return Err(invalid(format!(
            "growth exponent needs s > 4(k-1)/(5k) = {thr} for k = {k}, got s = {s}"
        )));
    }
    Ok((1.0 + 4.0 / kf) * (1.0 - s) / (5.0 * s - 4.0 * (kf - 1.0) / kf))
}

pub fn critical_exponents(k: u32, s: Option<f64>) -> Result<ExponentTable> {
    require_theorem_k(k)?;
    let kf = k as f64;
    let s_k = critical_index(k);
    if let Some(s) = s {
        if !(s > s_k) {
            return Err(invalid(format!(
                "s must exceed the critical index s_k = (k-4)/(2k) = {s_k} for k = {k}, got s = {s}"
            )));
        }
    }
    let gwp = gwp_threshold(k);
    Ok(ExponentTable {
        k,
        s,
        s_k,
        alpha_k: 0.1 - 2.0 / (5.0 * kf),
        beta_k: 0.3 - 6.0 / (5.0 * kf),
        gamma_k: s.map(|s| (s - s_k) / 3.0),
        p_k: 1.0 / (2.0 / (5.0 * kf) + 0.1),
        q_k: 1.0 / (0.3 - 4.0 / (5.0 * kf)),
        gwp_threshold: gwp,
        growth_exponent: s.filter(|&s| s > gwp).map(|s| {
            growth_exponent(k, s).expect("checked above threshold")
        }),
    })
}

/// Local existence time scale `||u0||_{H^s}^{-3 / (s - s_k)}` (constant 1).
pub fn local_time_heuristic(f: &Field, s: f64, k: u32) -> Result<f64> {
    local_time_from_norm(spectral::sobolev_norm(f, s), s, k)
}

pub fn local_time_from_norm(norm: f64, s: f64, k: u32) -> Result<f64> {
    let s_k = critical_index(k);
    if !(s > s_k) {
        return Err(invalid(format!(
            "local time scale needs s > s_k = {s_k}, got s = {s}"
        )));
    }
    Ok(norm.powf(-3.0 / (s - s_k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state::{default_grid, golden};
    use std::f64::consts::PI;

    fn grid() -> Grid {
        default_grid(5)
    }

    #[test]
    fn mass_examples() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        assert_eq!(mass(&Field::zeros(g)), 0.0);
        // midpoint oracle for int_0^{2 pi} sin^2
        let m = 100_000;
        let h = 2.0 * PI / m as f64;
        let quad: f64 = (0..m).map(|i| ((i as f64 + 0.5) * h).sin().powi(2) * h).sum();
        assert!((mass(&Field::from_fn(g, f64::sin)) - quad).abs() < 1e-9);
        let q = ClosedForm::ScaledGroundState { k: 5, amplitude: 1.0, dilation: 1.0 }.sample(&grid());
        assert!((mass(&q) - golden(5).unwrap().mass).abs() < 1e-12);
    }

    #[test]
    fn energy_examples() {
        let g = grid();
        assert_eq!(energy(&Field::zeros(g), ModelParams::focusing(5)), 0.0);
        let q = ClosedForm::ScaledGroundState { k: 5, amplitude: 1.0, dilation: 1.0 }.sample(&g);
        let e = energy(&q, ModelParams::focusing(5));
        assert!((e - mass(&q) / 18.0).abs() < 1e-12);
        let f = ClosedForm::Gaussian { amplitude: 0.7, width: 1.3, center: 0.4 }.sample(&g);
        assert!(energy(&f, ModelParams::defocusing(6)) > 0.0);
        assert!(ModelParams::new(6, 0).is_err());
        assert!(ModelParams::new(0, 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        let g = grid();
        let zero = threshold_report(&Field::zeros(g), 5).unwrap();
        assert_eq!(zero.lhs1, 0.0);
        assert_eq!(zero.lhs2, 0.0);
        assert_eq!(zero.classification, Classification::TheoremApplies);

        let q = ClosedForm::ScaledGroundState { k: 5, amplitude: 1.0, dilation: 1.0 }.sample(&g);
        let r = threshold_report(&q, 5).unwrap();
        assert!((r.lhs2 - r.rhs2).abs() < 1e-12 * r.rhs2);
        assert!(!r.gr2_holds);
        assert_eq!(r.classification, Classification::NotCovered);

        let half = q.scale(0.5);
        let r = threshold_report(&half, 5).unwrap();
        // direct evaluation with the relations M = (k+4)/k G, lkp2 = 2(k+2)/(k+4) M
        let gold = golden(5).unwrap();
        let (m, gq) = (0.25 * gold.mass, 0.25 * gold.grad_sq);
        let e = 0.5 * gq - 0.5f64.powi(7) * gold.lkp2 / 7.0;
        assert!((r.mass - m).abs() < 1e-12 && (r.energy - e).abs() < 1e-12);
        let want1 = e.powf(0.1) * m.powf(0.9);
        assert!((r.lhs1 - want1).abs() < 1e-12);
        assert!(r.gr1_holds && r.gr2_holds && r.energy_nonneg);
        assert_eq!(r.classification, Classification::TheoremApplies);

        assert!(matches!(threshold_report(&half, 4), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn barrier_examples() {
        let g = grid();
        let q = ClosedForm::ScaledGroundState { k: 8, amplitude: 0.6, dilation: 1.0 }
            .sample(&default_grid(8));
        let b = barrier(&q, 8).unwrap();
        assert!((b.x0 - 1.0 / (2.0 * b.b)).abs() < 1e-12 * b.x0);
        assert!((b.fx0 - 1.0 / (4.0 * b.b)).abs() < 1e-12 * b.fx0);
        for k in [5, 6, 7, 9] {
            let f = ClosedForm::Gaussian { amplitude: 0.5, width: 1.0, center: 0.0 }.sample(&g);
            let b = barrier(&f, k).unwrap();
            assert!(b.df(b.x0).abs() < 1e-12, "k={k}");
            assert!(b.d2f(b.x0) < 0.0);
            assert!((b.f(b.x0) - b.fx0).abs() < 1e-12 * b.fx0);
        }
        assert!(matches!(barrier(&Field::zeros(g), 5), Err(Error::ZeroField)));
    }

    #[test]
    fn barrier_at_ground_state_is_the_equality_case() {
        let q = ClosedForm::ScaledGroundState { k: 5, amplitude: 1.0, dilation: 1.0 }.sample(&grid());
        let b = barrier(&q, 5).unwrap();
        assert!((b.x_initial - b.x0).abs() < 1e-11 * b.x0);
        assert!((b.a - b.fx0).abs() < 1e-11 * b.fx0);
        assert!(!b.gradient_below_x0 && !b.energy_below_max);
    }

    #[test]
    fn exponent_examples() {
        let t = critical_exponents(5, None).unwrap();
        assert!((t.s_k - 0.1).abs() < 1e-15);
        assert!((t.gwp_threshold - 0.64).abs() < 1e-15);
        assert!((t.alpha_k - 0.02).abs() < 1e-15);
        assert!((t.beta_k - 0.06).abs() < 1e-15);
        assert!((t.p_k - 50.0 / 9.0).abs() < 1e-13);
        assert!((t.q_k - 50.0 / 7.0).abs() < 1e-13);
        assert!(t.gamma_k.is_none() && t.growth_exponent.is_none());

        let t = critical_exponents(6, Some(0.8)).unwrap();
        assert!((t.growth_exponent.unwrap() - 0.5).abs() < 1e-14);
        let t = critical_exponents(5, Some(1.0)).unwrap();
        assert!((t.gamma_k.unwrap() - 0.3).abs() < 1e-15);

        let err = critical_exponents(5, Some(0.05)).unwrap_err().to_string();
        assert!(err.contains("critical index"), "{err}");
        assert!(critical_exponents(5, Some(0.5)).unwrap().growth_exponent.is_none());
        assert!(growth_exponent(6, 0.6).unwrap_err().to_string().contains("4(k-1)/(5k)"));
        assert!(critical_exponents(4, None).is_err());
    }

    #[test]
    fn local_time_examples() {
        assert_eq!(local_time_from_norm(1.0, 1.0, 5).unwrap(), 1.0);
        let t1 = local_time_from_norm(1.3, 1.0, 5).unwrap();
        let t2 = local_time_from_norm(2.6, 1.0, 5).unwrap();
        assert!((t2 / t1 - 2f64.powf(-10.0 / 3.0)).abs() < 1e-14);
        let t = local_time_from_norm(2.0, 0.5, 4).unwrap();
        assert!((t - 2f64.powf(-6.0)).abs() < 1e-15);
        assert!(local_time_from_norm(2.0, 0.1, 5).is_err());
    }

    #[test]
    fn rescale_identity_and_errors() {
        let g = Grid::new(128, 40.0).unwrap();
        let f = ClosedForm::Gaussian { amplitude: 1.0, width: 2.0, center: 0.0 }.sample(&g);
        let r = rescale(&f, 1.0, 5).unwrap();
        assert_eq!(r.field, f);
        assert!(rescale(&f, 0.0, 5).is_err());
        assert!(rescale(&f, -2.0, 5).is_err());
    }

    #[test]
    fn sampled_rescale_matches_analytic() {
        let g = Grid::new(256, 40.0).unwrap();
        let fam = ClosedForm::Gaussian { amplitude: 1.0, width: 1.5, center: 0.5 };
        let f = fam.sample(&g);
        for lambda in [0.5, 2.0] {
            let r = rescale(&f, lambda, 6).unwrap();
            let exact = fam.rescaled(lambda, 6).unwrap().sample(&g);
            let e = r
                .field
                .values()
                .iter()
                .zip(exact.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(e < 1e-10, "lambda={lambda}: {e:e}");
            assert!(r.accuracy < 1e-8);
        }
    }

    #[test]
    fn homogeneous_norm_scaling_law() {
        let g = Grid::new(2048, 160.0).unwrap();
        let k = 6;
        let fam = ClosedForm::Gaussian { amplitude: 0.8, width: 2.0, center: 0.0 };
        let base = fam.sample(&g);
        for lambda in [0.5, 2.0, 4.0] {
            let u = fam.rescaled(lambda, k).unwrap().sample(&g);
            for s in [0.0, 0.5, 1.0] {
                let want = lambda.powf(s + 2.0 / k as f64 - 0.5)
                    * spectral::line_homogeneous_norm(&base, s);
                let got = spectral::line_homogeneous_norm(&u, s);
                assert!((got - want).abs() < 1e-10 * want, "lambda={lambda} s={s}");
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let g = grid();
        let f = ClosedForm::Gaussian { amplitude: 0.9, width: 1.2, center: 0.0 }.sample(&g);
        let t = f.translate(3.7);
        let p = ModelParams::focusing(5);
        assert!((mass(&t) - mass(&f)).abs() < 1e-12 * mass(&f));
        assert!((energy(&t, p) - energy(&f, p)).abs() < 1e-12 * energy(&f, p).abs());
    }
}
