//! Classify focusing initial data against the ground-state thresholds and
//! inspect the barrier function.

use gkdv::invariants::{self, ClosedForm};
use gkdv::Grid;

pub fn run_example() -> gkdv::Result<()> {
    let k = 5;
    let grid = Grid::new(2048, 80.0)?;
    for amp in [0.5, 0.9, 1.0, 1.2] {
        let u = ClosedForm::ScaledGroundState { k, amplitude: amp, dilation: 1.0 }.sample(&grid);
        let r = invariants::threshold_report(&u, k)?;
        let b = invariants::barrier(&u, k)?;
        println!(
            "{amp:.1} Q: {:<15} grad product {:.6} / {:.6}  2E = {:+.4} f(x0) = {:.4}",
            r.classification.to_string(),
            r.lhs2,
            r.rhs2,
            b.a,
            b.fx0
        );
    }
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
