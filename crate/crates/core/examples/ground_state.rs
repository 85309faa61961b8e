//! The ground state Q: closed form, norms, Pohozhaev identities, the sharp
//! Gagliardo-Nirenberg constant, and an independent shooting solve.

use gkdv::ground_state::{self, SharpConstantMethod};

pub fn run_example() -> gkdv::Result<()> {
    for k in [5u32, 6, 8] {
        let grid = ground_state::default_grid(k);
        let p = ground_state::ground_state_profile(k, &grid)?;
        let id = ground_state::pohozhaev_report(&p);
        let via_psi = ground_state::sharp_gn_constant(k, SharpConstantMethod::ViaPsi)?;
        let via_q = ground_state::sharp_gn_constant(k, SharpConstantMethod::ViaQ)?;
        println!(
            "k={k}: M={:.12} |Q'|^2={:.12} E={:.3e} residual={:.1e}",
            p.mass,
            p.grad_sq,
            p.energy,
            ground_state::ode_residual(&p)
        );
        println!(
            "      identities {:.1e} {:.1e} {:.1e}; K_opt {via_psi:.12} vs {via_q:.12}",
            id.lkp2_identity, id.gradient_identity, id.energy_identity
        );
    }

    let grid = gkdv::Grid::new(4096, 40.0)?;
    let shot = ground_state::shoot_ground_state(1, &grid)?;
    println!("shooting k=1: Q(0) = {:.12} (exact 1.5)", shot.amplitude);
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
