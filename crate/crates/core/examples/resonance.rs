//! A frequency tuple that is resonant for the equation but not for the
//! multiplier-weighted cube sum.

use gkdv::imethod::{self, IMethodParams};

pub fn run_example() -> gkdv::Result<()> {
    let p = IMethodParams::new(16.0, 0.5)?;
    match imethod::resonance_search(6, &p, 10_000_000)? {
        Some(w) => {
            println!("xi = {:?}", w.xi);
            println!("sum = {}, cube sum = {}, weighted = {:.6}", w.sum, w.cube_sum, w.weighted_cube_sum);
        }
        None => println!("no witness within budget"),
    }
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
