//! How large N must be to reach time T with the I-method iteration.

use gkdv::imethod;

pub fn run_example() -> gkdv::Result<()> {
    for s in [0.67, 0.75, 0.8, 0.9, 1.0] {
        let sch = imethod::iteration_schedule(6, s, 100.0)?;
        println!(
            "s={s:<4} N=2^{:<4} lambda={:.3e} M={:.3e}{}",
            sch.log2_n,
            sch.lambda,
            sch.iterations,
            if sch.impractical { " (impractical)" } else { "" }
        );
    }
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
