//! The I-operator and the decay of E(Iu) increments with N.

use gkdv::evolution::SimOptions;
use gkdv::imethod::{self, IMethodParams};
use gkdv::invariants::ClosedForm;
use gkdv::{Grid, ModelParams};

pub fn run_example() -> gkdv::Result<()> {
    let p = IMethodParams::new(8.0, 0.9)?;
    for xi in [4.0, 8.0, 12.0, 16.0, 32.0] {
        println!("m({xi:>4}) = {:.6}", imethod::multiplier_m(xi, &p));
    }

    let grid = Grid::new(256, 8.0 * std::f64::consts::PI)?;
    let u0 = ClosedForm::Gaussian { amplitude: 1.0, width: 0.4, center: 0.0 }.sample(&grid);
    let mp = ModelParams::defocusing(6);
    let e = imethod::modified_energy_paths(&u0, &p, mp);
    println!("E(Iu0): physical {:.15} spectral {:.15}", e.physical, e.spectral);

    let mut opts = SimOptions::new(0.1);
    opts.record_every = 20;
    opts.s_track = 0.9;
    let r = imethod::almost_conservation_sweep(&u0, mp, &p, &[2.0, 4.0, 8.0], &opts)?;
    for pt in &r.points {
        println!("N = {:>3}: sup |E1(t) - E1(0)| = {:.3e}", pt.n_cut, pt.sup_increment);
    }
    println!("slope {:.2}", r.slope);
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
