//! Scaling exponents and the invariance of the threshold products under
//! u -> lambda^{2/k} u(lambda x).

use gkdv::invariants::{self, ClosedForm};
use gkdv::{spectral, Grid};

pub fn run_example() -> gkdv::Result<()> {
    let t = invariants::critical_exponents(6, Some(0.8))?;
    println!("k=6 s=0.8: s_k={:.6} threshold={:.6} growth={:.6}", t.s_k, t.gwp_threshold, t.growth_exponent.unwrap_or(f64::NAN));

    let k = 5;
    let grid = Grid::new(2048, 160.0)?;
    let base = ClosedForm::Gaussian { amplitude: 0.8, width: 2.0, center: 0.0 };
    let s_k = invariants::critical_index(k);
    for lambda in [0.5, 1.0, 2.0, 4.0] {
        let u = base.rescaled(lambda, k)?.sample(&grid);
        let m = invariants::mass(&u);
        let g = invariants::grad_sq(&u);
        println!(
            "lambda={lambda}: gradient product {:.14} Hdot^s_k norm {:.14}",
            invariants::gradient_product(g, m, s_k),
            spectral::line_homogeneous_norm(&u, s_k)
        );
    }
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
