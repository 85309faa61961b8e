//! Propagate a focusing soliton and compare with the exact traveling wave.

use gkdv::evolution::{self, SimOptions};
use gkdv::{Grid, ModelParams};

pub fn run_example() -> gkdv::Result<()> {
    let k = 5;
    let grid = Grid::new(512, 60.0)?;
    let u0 = evolution::soliton(k, 1.0, -5.0, &grid, 0.0)?;
    let mut opts = SimOptions::new(0.5);
    opts.record_every = 500;
    let (series, u) = evolution::simulate_to_state(&u0, ModelParams::focusing(k), &opts)?;
    let exact = evolution::soliton(k, 1.0, -5.0, &grid, 0.5)?;
    println!("steps: {}", series.steps);
    println!("L2 error vs exact: {:.3e}", u.sub(&exact)?.l2_norm());
    println!("mass drift: {:.3e}", series.mass_drift());
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
