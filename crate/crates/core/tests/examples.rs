#[allow(dead_code)]
#[path = "../examples/spectral_basics.rs"]
mod spectral_basics;
#[allow(dead_code)]
#[path = "../examples/ground_state.rs"]
mod ground_state;
#[allow(dead_code)]
#[path = "../examples/thresholds.rs"]
mod thresholds;
#[allow(dead_code)]
#[path = "../examples/scaling.rs"]
mod scaling;
#[allow(dead_code)]
#[path = "../examples/soliton.rs"]
mod soliton;
#[allow(dead_code)]
#[path = "../examples/conservation.rs"]
mod conservation;
#[allow(dead_code)]
#[path = "../examples/modified_energy.rs"]
mod modified_energy;
#[allow(dead_code)]
#[path = "../examples/resonance.rs"]
mod resonance;
#[allow(dead_code)]
#[path = "../examples/gwp_schedule.rs"]
mod gwp_schedule;
#[allow(dead_code)]
#[path = "../examples/harness_sweep.rs"]
mod harness_sweep;

#[test]
fn spectral_basics_runs() {
    spectral_basics::run_example().unwrap();
}

#[test]
fn ground_state_runs() {
    ground_state::run_example().unwrap();
}

#[test]
fn thresholds_runs() {
    thresholds::run_example().unwrap();
}

#[test]
fn scaling_runs() {
    scaling::run_example().unwrap();
}

#[test]
fn soliton_runs() {
    soliton::run_example().unwrap();
}

#[test]
fn conservation_runs() {
    conservation::run_example().unwrap();
}

#[test]
fn modified_energy_runs() {
    modified_energy::run_example().unwrap();
}

#[test]
fn resonance_runs() {
    resonance::run_example().unwrap();
}

#[test]
fn gwp_schedule_runs() {
    gwp_schedule::run_example().unwrap();
}

#[test]
fn harness_sweep_runs() {
    harness_sweep::run_example().unwrap();
}
