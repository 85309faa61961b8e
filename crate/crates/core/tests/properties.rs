use gkdv::evolution::Stepper;
use gkdv::ground_state::{self, SharpConstantMethod};
use gkdv::harness::{self, Scenario, SimConfig};
use gkdv::imethod::{self, IMethodParams};
use gkdv::invariants::{self, ClosedForm, ModelParams};
use gkdv::spectral::{self, Field, Grid};
use num_complex::Complex64;
use proptest::prelude::*;

fn sup_diff(a: &Field, b: &Field) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Real field from explicit mode amplitudes `(re, im)` on `1..=modes.len()`.
fn field_from_modes(grid: Grid, modes: &[(f64, f64)]) -> Field {
    let n = grid.n();
    let mut c = vec![Complex64::default(); n];
    for (j, &(re, im)) in modes.iter().enumerate() {
        let j = j as i64 + 1;
        let z = Complex64::new(re, im) * n as f64;
        c[grid.index(j)] = z;
        c[grid.index(-j)] = z.conj();
    }
    Field::from_coefficients(grid, &c).unwrap()
}

fn modes(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max)
}

/// Direct p-fold convolution of the normalized spectrum, truncated to
/// `|j| < n/2`.
fn convolution_power(f: &Field, p: u32) -> Vec<Complex64> {
    let g = f.grid();
    let n = g.n() as i64;
    let half = n / 2;
    let c = f.coefficients();
    let base: Vec<(i64, Complex64)> = (-(half - 1)..half)
        .map(|j| (j, c[g.index(j)] / n as f64))
        .filter(|(_, z)| z.norm() > 0.0)
        .collect();
    let mut acc = std::collections::BTreeMap::new();
    acc.insert(0i64, Complex64::new(1.0, 0.0));
    for _ in 0..p {
        let mut next = std::collections::BTreeMap::new();
        for (&j, &a) in &acc {
            for &(l, b) in &base {
                *next.entry(j + l).or_insert(Complex64::default()) += a * b;
            }
        }
        acc = next;
    }
    let mut out = vec![Complex64::default(); g.n()];
    for (j, z) in acc {
        if j.abs() < half {
            out[g.index(j)] = z * n as f64;
        }
    }
    out
}

#[test]
fn dealiased_powers_match_convolution_oracle() {
    for n in [8usize, 16, 32] {
        let g = Grid::new(n, 7.0).unwrap();
        let ms: Vec<(f64, f64)> = (1..n / 2)
            .map(|j| ((0.37 * j as f64).sin() / j as f64, (1.3 * j as f64).cos() / j as f64))
            .collect();
        let f = field_from_modes(g, &ms);
        for p in 2..=8u32 {
            let want = convolution_power(&f, p);
            let got = spectral::dealias_power(&f, p).coefficients();
            let scale = want.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm() <= 1e-11 * scale, "n={n} p={p}: {a} vs {b}");
            }
            let mean = spectral::integral_of_power(&f, p) / g.length();
            assert!((mean - want[0].re / n as f64).abs() <= 1e-11 * scale / n as f64);
        }
    }
}

#[test]
fn dealias_product_matches_power() {
    let g = Grid::new(32, 10.0).unwrap();
    let f = field_from_modes(g, &[(0.3, 0.1), (0.0, -0.2), (0.1, 0.05)]);
    let p6 = spectral::dealias_power(&f, 6);
    let prod = spectral::dealias_product(&[&f, &f, &f, &f, &f, &f]).unwrap();
    assert!(sup_diff(&p6, &prod) < 1e-13);
}

/// Band-limited random data times a Gaussian envelope, so that it decays on
/// the periodic domain.
fn localized(grid: Grid, seed: u64, width: f64) -> Field {
    let r = harness::random_field(&grid, 1.0, 1.0, seed);
    let env = Field::from_fn(grid, |x| (-0.5 * (x / width).powi(2)).exp());
    Field::new(
        grid,
        r.values().iter().zip(env.values()).map(|(a, b)| a * b).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(ms in modes(15), len in 1.0..50.0f64) {
        let g = Grid::new(32, len).unwrap();
        let f = field_from_modes(g, &ms);
        let phys: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.dx();
        let spec: f64 = f.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>() * len / (32.0 * 32.0);
        prop_assert!((phys - spec).abs() <= 1e-12 * phys.max(1e-300));
    }

    #[test]
    fn fractional_semigroup(ms in modes(15), a in 0.0..2.0f64, b in 0.0..2.0f64) {
        let g = Grid::new(32, 9.0).unwrap();
        let f = field_from_modes(g, &ms);
        let ab = spectral::fractional_derivative(&spectral::fractional_derivative(&f, a).unwrap(), b).unwrap();
        let direct = spectral::fractional_derivative(&f, a + b).unwrap();
        prop_assert!(sup_diff(&ab, &direct) <= 1e-11 * direct.max_abs().max(1.0));
    }

    #[test]
    fn bessel_round_trip(ms in modes(15), s in -3.0..3.0f64) {
        let g = Grid::new(32, 12.0).unwrap();
        let f = field_from_modes(g, &ms);
        let back = spectral::bessel_potential(&spectral::bessel_potential(&f, s), -s);
        prop_assert!(sup_diff(&back, &f) <= 1e-11 * f.max_abs().max(1.0));
    }

    #[test]
    fn norms_translation_invariant(ms in modes(15), shift in -20.0..20.0f64, s in 0.0..2.0f64) {
        let g = Grid::new(32, 12.0).unwrap();
        let f = field_from_modes(g, &ms);
        let t = f.translate(shift);
        let (a, b) = (spectral::sobolev_norm(&f, s), spectral::sobolev_norm(&t, s));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300) + 1e-14);
    }

    #[test]
    fn threshold_products_scale_invariant(
        amp in 0.2..2.0f64, width in 1.0..3.0f64, lambda in 0.5..3.0f64, k in 5u32..9
    ) {
        let s_k = invariants::critical_index(k);
        let g = Grid::new(4096, 200.0).unwrap();
        let base = ClosedForm::Gaussian { amplitude: amp, width, center: 0.0 };
        let (u, v) = (base.sample(&g), base.rescaled(lambda, k).unwrap().sample(&g));
        let p = ModelParams::focusing(k);
        let gp = |f: &Field| invariants::gradient_product(invariants::grad_sq(f), invariants::mass(f), s_k);
        let ep = |f: &Field| invariants::energy_product(invariants::energy(f, p), invariants::mass(f), s_k);
        prop_assert!((gp(&u) - gp(&v)).abs() <= 1e-10 * gp(&u).abs());
        prop_assert!((ep(&u) - ep(&v)).abs() <= 1e-10 * ep(&u).abs().max(1e-12));
    }

    #[test]
    fn multiplier_shape(n in 1.0..64.0f64, s in 0.05..1.0f64, a in 0.0..500.0f64, b in 0.0..500.0f64) {
        let p = IMethodParams::new(n, s).unwrap();
        let (ma, mb) = (imethod::multiplier_m(a, &p), imethod::multiplier_m(b, &p));
        prop_assert_eq!(ma, imethod::multiplier_m(-a, &p));
        prop_assert!(ma > 0.0 && ma <= 1.0);
        if a <= b {
            prop_assert!(mb <= ma);
        }
    }

    #[test]
    fn multiplier_sandwich(n in 1.0..40.0f64, s in 0.05..1.0f64) {
        let p = IMethodParams::new(n, s).unwrap();
        let c = imethod::sandwich_constant(&p);
        let g = Grid::new(1024, 8.0 * std::f64::consts::PI).unwrap();
        for xi in g.frequencies() {
            let br = 1.0 + xi.abs();
            let mid = imethod::multiplier_m(xi, &p) * br;
            prop_assert!(br.powf(s) <= mid * (1.0 + 1e-14));
            prop_assert!(mid <= c * n.powf(1.0 - s) * br.powf(s) * (1.0 + 1e-14));
        }
    }

    #[test]
    fn linear_flow_is_exact_phase(ms in modes(10), dt in 0.001..0.05f64, steps in 1usize..20) {
        let g = Grid::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let f = field_from_modes(g, &ms);
        let mut st = Stepper::new(g, ModelParams::focusing(5), dt).unwrap().without_nonlinearity();
        let mut v = f.coefficients();
        for _ in 0..steps {
            st.advance(&mut v);
        }
        let t = dt * steps as f64;
        let want = f.apply_symbol(|_| 1.0);
        let mut w = want.coefficients();
        for (i, z) in w.iter_mut().enumerate() {
            let xi = g.mode(i) as f64 * g.dxi();
            *z *= Complex64::from_polar(1.0, xi.powi(3) * t);
        }
        w[g.nyquist_index()] = Complex64::default();
        for (a, b) in v.iter().zip(&w) {
            prop_assert!((a - b).norm() <= 1e-11 * 32.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn modified_energy_paths_agree(seed in 0u64..1_000_000, n_cut in 1.0..20.0f64, s in 0.3..1.0f64, k in 1u32..9) {
        let g = Grid::new(256, 30.0).unwrap();
        let f = harness::random_field(&g, 0.8, 1.0, seed);
        let p = IMethodParams::new(n_cut, s).unwrap();
        let e = imethod::modified_energy_paths(&f, &p, ModelParams::defocusing(k));
        prop_assert!((e.physical - e.spectral).abs() <= 1e-10 * e.spectral.abs().max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gagliardo_nirenberg_bound(seed in 0u64..1_000_000, k in 5u32..9, width in 1.0..6.0f64) {
        let g = Grid::new(512, 80.0).unwrap();
        let f = localized(g, seed, width);
        let q = ground_state::gn_quotient(&f, k).unwrap();
        let kopt = ground_state::sharp_gn_constant(k, SharpConstantMethod::ViaQ).unwrap();
        prop_assert!(q <= kopt * (1.0 + 1e-6), "{} > {}", q, kopt);
    }
}

#[test]
fn sweep_is_order_stable_and_deterministic() {
    let root = tempfile::tempdir().unwrap();
    let make = |k: u32, seed: u64, tag: &str| {
        let text = format!(
            "k = {k}\nmu = -1\ngrid.n = 64\ngrid.length = 30\nt_final = 0.05\nrecord_every = 10\n\
             initial.kind = random\ninitial.amplitude = 0.3\nseed = {seed}\noutput.dir = {}\n",
            root.path().join(tag).display()
        );
        (Scenario::Conservation, SimConfig::parse(&text, None).unwrap())
    };
    let jobs: Vec<_> = (0..4).map(|i| make(2 + 2 * (i % 2), i as u64, &format!("par{i}"))).collect();
    let serial: Vec<_> = (0..4).map(|i| make(2 + 2 * (i % 2), i as u64, &format!("ser{i}"))).collect();
    let par = harness::sweep(&jobs, 2).unwrap();
    let ser = harness::sweep(&serial, 1).unwrap();
    assert_eq!(par.len(), 4);
    for (i, (a, b)) in par.iter().zip(&ser).enumerate() {
        assert_eq!(a.config.seed, i as u64);
        assert!(a.passed() && b.passed());
        let fa = std::fs::read(&a.series_files[0]).unwrap();
        let fb = std::fs::read(&b.series_files[0]).unwrap();
        assert_eq!(fa, fb, "job {i} differs between parallel and serial runs");
    }
}

#[test]
fn sweep_isolates_failures() {
    let root = tempfile::tempdir().unwrap();
    let ok = SimConfig::parse(
        &format!("k = 6\nimethod.s = 0.8\noutput.dir = {}", root.path().display()),
        None,
    )
    .unwrap();
    // odd k is outside the schedule's scope
    let bad = SimConfig { k: 5, ..ok.clone() };
    let reports = harness::sweep(
        &[(Scenario::GwpSchedule, bad), (Scenario::GwpSchedule, ok)],
        2,
    )
    .unwrap();
    assert!(reports[0].error.is_some() && !reports[0].passed());
    assert!(reports[1].passed());
    assert!(harness::sweep(&[], 0).is_err());
}

#[test]
fn single_job_sweep_equals_run_scenario() {
    let root = tempfile::tempdir().unwrap();
    let cfg = SimConfig::parse(
        &format!("k = 6\nresonance.N = 16\noutput.dir = {}", root.path().display()),
        None,
    )
    .unwrap();
    let direct = harness::run_scenario(Scenario::Resonance, &cfg).unwrap();
    let swept = harness::sweep(&[(Scenario::Resonance, cfg)], 1).unwrap();
    assert_eq!(direct.assertions.len(), swept[0].assertions.len());
    for (a, b) in direct.assertions.iter().zip(&swept[0].assertions) {
        assert_eq!((a.passed, &a.detail), (b.passed, &b.detail));
    }
    assert!(root.path().join("resonance_witness.csv").exists());
}
