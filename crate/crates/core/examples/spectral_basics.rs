//! Grids, spectral derivatives, Sobolev norms and alias-free powers.

use gkdv::spectral::{self, Field, Grid};

pub fn run_example() -> gkdv::Result<()> {
    let grid = Grid::new(64, 2.0 * std::f64::consts::PI)?;
    let u = Field::from_fn(grid, |x| x.sin() + 0.5 * (2.0 * x).cos());

    let ux = u.derivative(1);
    let exact = Field::from_fn(grid, |x| x.cos() - (2.0 * x).sin());
    let err = ux.sub(&exact)?.max_abs();
    println!("max |u_x - exact|      = {err:.2e}");

    let half = spectral::fractional_derivative(&u, 0.5)?;
    println!("||D^1/2 u||_L2         = {:.12}", half.l2_norm());
    println!("||u||_H^1              = {:.12}", spectral::sobolev_norm(&u, 1.0));
    println!("||u||_H-dot^1          = {:.12}", spectral::homogeneous_sobolev_norm(&u, 1.0));

    // mean of u^4 computed on a padded grid is exact for trigonometric data
    let mean4 = spectral::integral_of_power(&u, 4) / grid.length();
    println!("mean of u^4            = {mean4:.15}");
    println!("padded length (deg 4)  = {}", spectral::padded_len(grid.n(), 4));
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
