//! Periodic grid, Fourier analysis/synthesis, Fourier multipliers and
//! alias-free products.
//!
//! The real line is modelled by the periodic interval `[-L/2, L/2)` sampled at
//! `n` equispaced points `x_m = -L/2 + m L/n`. Spectral coefficients use the
//! unnormalized forward DFT
//!
//! ```text
//! c_j = sum_m u_m exp(-i xi_j x_m'),   x_m' = m L / n,
//! ```
//!
//! stored in FFT order (`j = 0, 1, .., n/2 - 1, -n/2, .., -1`), and the inverse
//! transform divides by `n`. With this convention Parseval reads
//! `sum |u_m|^2 dx = (L / n^2) sum |c_j|^2`. Nothing outside this module
//! depends on the convention: norms and multipliers are exposed as functions.
//!
//! The Nyquist coefficient (`j = -n/2`) has no partner and is zeroed by every
//! derivative so that odd-order operators keep fields real.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Relative tolerance for the Hermitian-symmetry check of spectral input.
pub const HERMITIAN_TOL: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

pub(crate) fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Periodic spatial discretization and its frequency lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

/// Builds a grid of `n` points on a domain of length `length`.
pub fn make_grid(n: usize, length: f64) -> Result<Grid> {
    Grid::new(n, length)
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n must be even, got {n}")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n must be at least 8, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        Ok(Grid { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Lattice spacing `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest resolved |xi| (the Nyquist frequency `pi n / L`).
    pub fn xi_max(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    pub fn x(&self, m: usize) -> f64 {
        -0.5 * self.length + m as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.x(m)).collect()
    }

    /// Signed mode number of the coefficient stored at FFT index `idx`.
    pub fn mode(&self, idx: usize) -> i64 {
        let h = self.n / 2;
        if idx < h {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// FFT index of the signed mode number `j` (must satisfy `-n/2 <= j < n/2`).
    pub fn index(&self, j: i64) -> usize {
        if j >= 0 {
            j as usize
        } else {
            (self.n as i64 + j) as usize
        }
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Frequencies `xi_j = 2 pi j / L` in FFT storage order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.mode(i) as f64 * self.dxi()).collect()
    }

    /// Frequencies sorted ascending, `j = -n/2 .. n/2 - 1`.
    pub fn frequencies(&self) -> Vec<f64> {
        let h = self.n as i64 / 2;
        (-h..h).map(|j| j as f64 * self.dxi()).collect()
    }
}

/// A real function sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(invalid(format!(
                "expected {} samples, got {}",
                grid.n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("field samples must be finite"));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: vec![0.0; grid.n],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n).map(|m| f(grid.x(m))).collect();
        Field { grid, values }
    }

    /// Synthesizes a field from FFT-ordered coefficients. The coefficients
    /// must be Hermitian, `c(-xi) = conj(c(xi))`, to relative tolerance
    /// [`HERMITIAN_TOL`]; the Nyquist coefficient must be real.
    pub fn from_coefficients(grid: Grid, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != grid.n {
            return Err(invalid(format!(
                "expected {} coefficients, got {}",
                grid.n,
                coeffs.len()
            )));
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tol = HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE);
        for i in 0..grid.n {
            let partner = (grid.n - i) % grid.n;
            if (coeffs[i] - coeffs[partner].conj()).norm() > tol {
                return Err(invalid(format!(
                    "coefficients are not Hermitian at mode {}",
                    grid.mode(i)
                )));
            }
        }
        Ok(Self::from_spectrum_unchecked(grid, coeffs.to_vec()))
    }

    pub(crate) fn from_spectrum_unchecked(grid: Grid, mut coeffs: Vec<Complex64>) -> Self {
        inverse_in_place(&mut coeffs);
        let values = coeffs.iter().map(|c| c.re).collect();
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Spectral view: unnormalized forward DFT in FFT order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        plan_forward(self.grid.n).process(&mut buf);
        buf
    }

    /// Multiplies the spectrum by an even real symbol `sym(xi)`.
    pub fn apply_symbol(&self, sym: impl Fn(f64) -> f64) -> Field {
        let mut c = self.coefficients();
        for (i, ci) in c.iter_mut().enumerate() {
            *ci *= sym(self.grid.mode(i) as f64 * self.grid.dxi());
        }
        Field::from_spectrum_unchecked(self.grid, c)
    }

    /// Integer-order derivative `d^order/dx^order`, Nyquist zeroed.
    pub fn derivative(&self, order: u32) -> Field {
        if order == 0 {
            return self.clone();
        }
        let mut c = self.coefficients();
        let i_pow = Complex64::new(0.0, 1.0).powu(order);
        for (i, ci) in c.iter_mut().enumerate() {
            let xi = self.grid.mode(i) as f64 * self.grid.dxi();
            *ci *= i_pow * xi.powi(order as i32);
        }
        c[self.grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        Field::from_spectrum_unchecked(self.grid, c)
    }

    /// Translation `f(x - shift)` as a spectral phase shift. The Nyquist mode
    /// is dropped since it cannot be shifted while staying real.
    pub fn translate(&self, shift: f64) -> Field {
        let mut c = self.coefficients();
        for (i, ci) in c.iter_mut().enumerate() {
            let xi = self.grid.mode(i) as f64 * self.grid.dxi();
            *ci *= Complex64::from_polar(1.0, -xi * shift);
        }
        c[self.grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        Field::from_spectrum_unchecked(self.grid, c)
    }

    pub fn scale(&self, a: f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Trapezoidal (spectrally accurate) integral over one period.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// Physical-space L2 norm.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// Largest sample magnitude among the first and last `width` points.
    pub fn edge_magnitude(&self, width: usize) -> f64 {
        let w = width.min(self.grid.n / 2).max(1);
        self.values[..w]
            .iter()
            .chain(&self.values[self.grid.n - w..])
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

pub(crate) fn inverse_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    plan_inverse(n).process(buf);
    let inv = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= inv;
    }
}

/// `sum |c|^2` converted to the physical L2 norm squared.
pub(crate) fn spectral_l2_sq(grid: &Grid, coeffs: &[Complex64], weight: impl Fn(f64) -> f64) -> f64 {
    let s: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| weight(grid.mode(i) as f64 * grid.dxi()) * c.norm_sqr())
        .sum();
    s * grid.length / (grid.n as f64 * grid.n as f64)
}

/// Fourier multiplier `|xi|^s` (homogeneous fractional derivative).
pub fn fractional_derivative(f: &Field, s: f64) -> Result<Field> {
    if !(s >= 0.0) {
        return Err(invalid(format!("fractional order must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    let mut c = f.coefficients();
    let g = f.grid;
    for (i, ci) in c.iter_mut().enumerate() {
        *ci *= (g.mode(i) as f64 * g.dxi()).abs().powf(s);
    }
    c[g.nyquist_index()] = Complex64::new(0.0, 0.0);
    Ok(Field::from_spectrum_unchecked(g, c))
}

/// Bessel potential with symbol `(1 + |xi|)^s`.
///
/// Note the bracket is `1 + |xi|`, not `(1 + xi^2)^{1/2}`; the two give
/// equivalent norms.
pub fn bessel_potential(f: &Field, s: f64) -> Field {
    if s == 0.0 {
        return f.clone();
    }
    f.apply_symbol(|xi| (1.0 + xi.abs()).powf(s))
}

/// Inhomogeneous Sobolev norm `||(1 + |xi|)^s f^||_{L2}`.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let c = f.coefficients();
    spectral_l2_sq(&f.grid, &c, |xi| (1.0 + xi.abs()).powf(2.0 * s)).sqrt()
}

/// Homogeneous seminorm `|| |xi|^s f^ ||_{L2}` on the periodic lattice.
pub fn homogeneous_sobolev_norm(f: &Field, s: f64) -> f64 {
    let c = f.coefficients();
    homogeneous_from_coefficients(&f.grid, &c, s)
}

pub(crate) fn homogeneous_from_coefficients(grid: &Grid, c: &[Complex64], s: f64) -> f64 {
    if s == 0.0 {
        return spectral_l2_sq(grid, c, |_| 1.0).sqrt();
    }
    spectral_l2_sq(grid, c, |xi| xi.abs().powf(2.0 * s)).sqrt()
}

/// Real-line seminorm `|| |xi|^s u^ ||_{L2(R)}` of a field that has decayed
/// at the domain edge.
///
/// The lattice sum in [`homogeneous_sobolev_norm`] converges only
/// algebraically in `2 pi / L` when `|xi|^s` is not smooth at the origin. Here
/// the continuous transform `u^(xi) = dx sum_m u_m exp(-i xi x_m)` is evaluated
/// at the nodes of a double-exponential rule on `[0, xi_max]`, which absorbs
/// the endpoint singularity.
pub fn line_homogeneous_norm(f: &Field, s: f64) -> f64 {
    let g = f.grid;
    let b = g.xi_max();
    let h = 1.0 / 64.0;
    let t_max = 4.0;
    let steps = (t_max / h) as i64;
    let xs = g.points();
    let mut acc = 0.0;
    for k in -steps..=steps {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let xi = b / (1.0 + (-2.0 * u).exp());
        let w = 0.5 * b * 0.5 * PI * t.cosh() / u.cosh().powi(2);
        if !(w > 0.0) || !(xi > 0.0) {
            continue;
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for (x, v) in xs.iter().zip(&f.values) {
            let (sn, cs) = (xi * x).sin_cos();
            re += v * cs;
            im -= v * sn;
        }
        let mag_sq = (re * re + im * im) * g.dx() * g.dx();
        acc += w * xi.powf(2.0 * s) * mag_sq;
    }
    // (1 / 2 pi) over the whole line = (1 / pi) over the half line
    (h * acc / PI).sqrt()
}

/// Number of points on the padded grid used for a degree-`d` product:
/// `ceil((d + 1) n / 2)` rounded up to an even integer.
pub fn padded_len(n: usize, degree: usize) -> usize {
    let m = ((degree + 1) * n).div_ceil(2);
    m + m % 2
}

/// Copies FFT-ordered coefficients of an `n` grid into an `m > n` grid,
/// scaling for the normalization and splitting the Nyquist coefficient
/// evenly between `+n/2` and `-n/2`.
fn pad_spectrum(src: &[Complex64], dst: &mut [Complex64]) {
    let n = src.len();
    let m = dst.len();
    let h = n / 2;
    let r = m as f64 / n as f64;
    dst.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    for j in 0..h {
        dst[j] = src[j] * r;
    }
    for j in 1..h {
        dst[m - j] = src[n - j] * r;
    }
    let nyq = src[h] * (0.5 * r);
    dst[h] = nyq;
    dst[m - h] = nyq;
}

/// Truncates padded coefficients back to `n` modes, Nyquist zeroed.
fn truncate_spectrum(src: &[Complex64], dst: &mut [Complex64]) {
    let m = src.len();
    let n = dst.len();
    let h = n / 2;
    let r = n as f64 / m as f64;
    for j in 0..h {
        dst[j] = src[j] * r;
    }
    for j in 1..h {
        dst[n - j] = src[m - j] * r;
    }
    dst[h] = Complex64::new(0.0, 0.0);
}

/// Reusable buffers and plans for alias-free powers of one field.
///
/// A workspace belongs to one worker; it is `Send` but deliberately not shared.
pub struct PowerWorkspace {
    n: usize,
    m: usize,
    fwd_m: Arc<dyn Fft<f64>>,
    inv_m: Arc<dyn Fft<f64>>,
    padded: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl PowerWorkspace {
    /// Workspace for powers up to `max_degree` of fields with `n` modes.
    pub fn new(n: usize, max_degree: usize) -> Self {
        let m = padded_len(n, max_degree.max(1));
        let fwd_m = plan_forward(m);
        let inv_m = plan_inverse(m);
        let scratch_len = fwd_m
            .get_inplace_scratch_len()
            .max(inv_m.get_inplace_scratch_len());
        PowerWorkspace {
            n,
            m,
            fwd_m,
            inv_m,
            padded: vec![Complex64::new(0.0, 0.0); m],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn padded_len(&self) -> usize {
        self.m
    }

    /// Computes the `n`-mode coefficients of `u^p` from those of `u`, exact
    /// for `p` up to the workspace degree.
    pub fn power(&mut self, coeffs: &[Complex64], p: u32, out: &mut [Complex64]) {
        self.power_padded(coeffs, p);
        truncate_spectrum(&self.padded, out);
    }

    /// Exact mean of `u^p` over one period (the `xi = 0` coefficient of the
    /// alias-free product divided by `n`).
    pub fn mean_of_power(&mut self, coeffs: &[Complex64], p: u32) -> f64 {
        self.power_padded(coeffs, p);
        self.padded[0].re / self.m as f64
    }

    fn power_padded(&mut self, coeffs: &[Complex64], p: u32) {
        assert_eq!(coeffs.len(), self.n);
        pad_spectrum(coeffs, &mut self.padded);
        self.inv_m
            .process_with_scratch(&mut self.padded, &mut self.scratch);
        let inv = 1.0 / self.m as f64;
        for c in self.padded.iter_mut() {
            let v = c.re * inv;
            *c = Complex64::new(v.powi(p as i32), 0.0);
        }
        self.fwd_m
            .process_with_scratch(&mut self.padded, &mut self.scratch);
    }
}

/// Alias-free pointwise product of `fs.len()` fields.
///
/// Each factor is interpolated onto a grid of [`padded_len`] points, the
/// samples are multiplied, and the result is truncated back to `n` modes. For
/// band-limited factors the retained modes (`|j| < n/2`) are exact.
pub fn dealias_product(fs: &[&Field]) -> Result<Field> {
    let first = *fs
        .first()
        .ok_or_else(|| invalid("dealias_product needs at least one factor"))?;
    for f in fs {
        first.check_grid(f)?;
    }
    if fs.len() == 1 {
        return Ok(first.clone());
    }
    let grid = first.grid;
    let m = padded_len(grid.n, fs.len());
    let inv_m = plan_inverse(m);
    let fwd_m = plan_forward(m);
    let mut prod = vec![1.0; m];
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    for f in fs {
        pad_spectrum(&f.coefficients(), &mut padded);
        inv_m.process(&mut padded);
        for (p, c) in prod.iter_mut().zip(&padded) {
            *p *= c.re / m as f64;
        }
    }
    let mut spec: Vec<Complex64> = prod.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd_m.process(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n];
    truncate_spectrum(&spec, &mut out);
    Ok(Field::from_spectrum_unchecked(grid, out))
}

/// Alias-free `u^p`.
pub fn dealias_power(f: &Field, p: u32) -> Field {
    if p == 0 {
        return Field::from_fn(f.grid, |_| 1.0);
    }
    if p == 1 {
        return f.clone();
    }
    let mut ws = PowerWorkspace::new(f.grid.n, p as usize);
    let mut out = vec![Complex64::new(0.0, 0.0); f.grid.n];
    ws.power(&f.coefficients(), p, &mut out);
    Field::from_spectrum_unchecked(f.grid, out)
}

/// Exact integral of `u^p` over one period for the band-limited interpolant.
pub fn integral_of_power(f: &Field, p: u32) -> f64 {
    if p <= 1 {
        return if p == 0 { f.grid.length } else { f.integral() };
    }
    let mut ws = PowerWorkspace::new(f.grid.n, p as usize);
    ws.mean_of_power(&f.coefficients(), p) * f.grid.length
}

/// Fraction of the L2 mass carried by the top 10% of resolved frequencies.
pub fn tail_fraction(grid: &Grid, coeffs: &[Complex64]) -> f64 {
    tail_fraction_weighted(grid, coeffs, |_| 1.0)
}

pub(crate) fn tail_fraction_weighted(
    grid: &Grid,
    coeffs: &[Complex64],
    weight: impl Fn(f64) -> f64,
) -> f64 {
    let cut = 0.9 * grid.xi_max();
    let mut total = 0.0;
    let mut tail = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let xi = grid.mode(i) as f64 * grid.dxi();
        let e = weight(xi) * c.norm_sqr();
        total += e;
        if xi.abs() >= cut {
            tail += e;
        }
    }
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_pi(n: usize) -> Grid {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    fn max_diff(a: &Field, b: &Field) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> Field {
        Field::new(grid, (0..grid.n()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    /// Direct DFT, independent of the FFT path.
    fn naive_dft(f: &Field) -> Vec<Complex64> {
        let g = f.grid();
        (0..g.n())
            .map(|i| {
                let j = g.mode(i) as f64;
                (0..g.n())
                    .map(|m| {
                        let ang = -2.0 * PI * j * m as f64 / g.n() as f64;
                        Complex64::from_polar(f.values()[m], ang)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn grid_examples() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let f = g.frequencies();
        let want = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (a, b) in f.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(make_grid(256, 100.0).unwrap().dx(), 0.390625);
        let err = make_grid(255, 2.0 * PI).unwrap_err().to_string();
        assert!(err.contains("n must be even"), "{err}");
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(16, 0.0).is_err());
        assert!(make_grid(16, -1.0).is_err());
    }

    #[test]
    fn grid_invariants() {
        let g = make_grid(64, 7.3).unwrap();
        assert_eq!(g.dx() * g.n() as f64, g.length());
        let f = g.frequencies();
        // symmetric except the single Nyquist mode at the start
        for j in 1..g.n() / 2 {
            assert_eq!(f[g.n() / 2 + j], -f[g.n() / 2 - j]);
        }
        assert!((f[0] + g.xi_max()).abs() < 1e-12);
        for i in 0..g.n() {
            assert_eq!(g.index(g.mode(i)), i);
        }
    }

    #[test]
    fn fft_matches_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_field(two_pi(16), &mut rng);
        let a = f.coefficients();
        let b = naive_dft(&f);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        // the naive transform uses x_m' = m L / n, so sin(x) on [-pi, pi)
        // picks up a sign: sin(x_m) = -sin(x_m')
        let g = two_pi(16);
        let c = Field::from_fn(g, |x| (x + PI).sin()).coefficients();
        assert!((c[1] - Complex64::new(0.0, -8.0)).norm() < 1e-12);
    }

    #[test]
    fn fractional_derivative_examples() {
        let g = two_pi(32);
        let f = Field::from_fn(g, |x| (3.0 * x).cos() + x.sin());
        assert_eq!(fractional_derivative(&f, 0.0).unwrap(), f);

        let s = Field::from_fn(g, f64::sin);
        assert!(max_diff(&fractional_derivative(&s, 2.0).unwrap(), &s) < 1e-13);

        let s2 = Field::from_fn(g, |x| (2.0 * x).sin());
        let got = fractional_derivative(&s2, 0.5).unwrap();
        // independent oracle: naive DFT, multiply by |j|^{1/2}, naive inverse
        let c = naive_dft(&s2);
        let want: Vec<f64> = (0..g.n())
            .map(|m| {
                let z: Complex64 = (0..g.n())
                    .map(|i| {
                        let j = g.mode(i) as f64;
                        c[i] * (j.abs().sqrt())
                            * Complex64::from_polar(1.0, 2.0 * PI * j * m as f64 / g.n() as f64)
                    })
                    .sum();
                z.re / g.n() as f64
            })
            .collect();
        let want = Field::new(g, want).unwrap();
        assert!(max_diff(&got, &want) < 1e-12);
        let closed = Field::from_fn(g, |x| 2f64.sqrt() * (2.0 * x).sin());
        assert!(max_diff(&got, &closed) < 1e-12);

        assert!(fractional_derivative(&s, -0.1).is_err());
    }

    #[test]
    fn bessel_potential_examples() {
        let g = two_pi(32);
        let f = Field::from_fn(g, |x| x.cos() * 0.3);
        assert_eq!(bessel_potential(&f, 0.0), f);
        let one = Field::from_fn(g, |_| 1.0);
        assert!(max_diff(&bessel_potential(&one, 3.0), &one) < 1e-13);
        let s = Field::from_fn(g, f64::sin);
        let twice = s.scale(2.0);
        assert!(max_diff(&bessel_potential(&s, 1.0), &twice) < 1e-13);
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = two_pi(64);
        assert_eq!(sobolev_norm(&Field::zeros(g), 1.7), 0.0);
        let s = Field::from_fn(g, f64::sin);
        // quadrature oracle: int_0^{2pi} sin^2 = pi, by a fine midpoint rule
        let m = 200_000;
        let h = 2.0 * PI / m as f64;
        let quad: f64 = (0..m).map(|i| ((i as f64 + 0.5) * h).sin().powi(2) * h).sum();
        assert!((quad - PI).abs() < 1e-9);
        assert!((sobolev_norm(&s, 0.0) - quad.sqrt()).abs() < 1e-9);
        assert!((sobolev_norm(&s, 0.0) - PI.sqrt()).abs() < 1e-13);
        assert!((homogeneous_sobolev_norm(&s, 1.0) - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn derivative_and_translation() {
        let g = two_pi(32);
        let f = Field::from_fn(g, |x| (2.0 * x).sin());
        let d = f.derivative(1);
        let want = Field::from_fn(g, |x| 2.0 * (2.0 * x).cos());
        assert!(max_diff(&d, &want) < 1e-12);
        let t = f.translate(0.3);
        let want = Field::from_fn(g, |x| (2.0 * (x - 0.3)).sin());
        assert!(max_diff(&t, &want) < 1e-13);
    }

    #[test]
    fn from_coefficients_rejects_non_hermitian() {
        let g = two_pi(8);
        let mut c = vec![Complex64::new(0.0, 0.0); 8];
        c[1] = Complex64::new(1.0, 1.0);
        assert!(Field::from_coefficients(g, &c).is_err());
        c[7] = Complex64::new(1.0, -1.0);
        let f = Field::from_coefficients(g, &c).unwrap();
        let back = f.coefficients();
        for (a, b) in back.iter().zip(&c) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn padded_lengths() {
        assert_eq!(padded_len(32, 2), 48);
        assert_eq!(padded_len(32, 6), 112); // 3.5 x
        assert_eq!(padded_len(10, 2), 16); // 15 -> 16
        assert_eq!(padded_len(1024, 7), 4096);
    }

    #[test]
    fn product_of_sines() {
        let g = two_pi(32);
        let s = Field::from_fn(g, f64::sin);
        let p = dealias_product(&[&s, &s]).unwrap();
        let want = Field::from_fn(g, |x| 0.5 * (1.0 - (2.0 * x).cos()));
        assert!(max_diff(&p, &want) < 1e-14);
        assert_eq!(dealias_product(&[&s]).unwrap(), s);
        let other = Field::zeros(two_pi(16));
        assert!(matches!(dealias_product(&[&s, &other]), Err(Error::GridMismatch)));
        assert!(dealias_product(&[]).is_err());
    }

    #[test]
    fn integral_of_power_is_exact_for_trig_polynomials() {
        let g = two_pi(16);
        // cos^8 integrates to 2 pi * 35/128; degree 8 needs modes up to 8 > n/2
        let f = Field::from_fn(g, |x| x.cos());
        let got = integral_of_power(&f, 8);
        assert!((got - 2.0 * PI * 35.0 / 128.0).abs() < 1e-13);
        let naive: f64 = f.values().iter().map(|v| v.powi(8)).sum::<f64>() * g.dx();
        assert!((got - naive).abs() < 1e-12);
    }

    #[test]
    fn tail_fraction_detects_high_modes() {
        let g = two_pi(64);
        let low = Field::from_fn(g, f64::sin);
        assert!(tail_fraction(&g, &low.coefficients()) < 1e-25);
        let high = Field::from_fn(g, |x| (30.0 * x).sin());
        assert!((tail_fraction(&g, &high.coefficients()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn line_norm_of_gaussian() {
        // u = exp(-x^2 / 2): ||u||^2_{H^s dot} = Gamma(s + 1/2)
        let g = Grid::new(512, 40.0).unwrap();
        let f = Field::from_fn(g, |x| (-0.5 * x * x).exp());
        let gammas = [(0.0, PI.sqrt()), (0.5, 1.0), (1.0, 0.5 * PI.sqrt())];
        for (s, gamma) in gammas {
            let got = line_homogeneous_norm(&f, s);
            assert!((got - f64::sqrt(gamma)).abs() < 1e-11, "s={s}: {got}");
        }
    }
}
