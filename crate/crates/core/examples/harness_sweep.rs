//! Run several scenario configs concurrently and print their assertions.

use gkdv::harness::{self, Scenario, SimConfig};

pub fn run_example() -> gkdv::Result<()> {
    let out = std::env::temp_dir().join("gkdv-harness-example");
    let mut jobs = Vec::new();
    for (k, t) in [(4u32, 0.2), (6, 0.2)] {
        let text = format!(
            "k = {k}\nmu = -1\ngrid.n = 128\ngrid.length = 40\nt_final = {t}\n\
             initial.kind = random\ninitial.amplitude = 0.3\ninitial.decay = 2\nseed = 11\n\
             output.dir = {}\n",
            out.join(format!("k{k}")).display()
        );
        jobs.push((Scenario::Conservation, SimConfig::parse(&text, None)?));
    }
    let schedule = SimConfig::parse(&format!("k = 6\nimethod.s = 0.8\noutput.dir = {}", out.display()), None)?;
    jobs.push((Scenario::GwpSchedule, schedule));

    for r in harness::sweep(&jobs, 2)? {
        println!("{} (k = {}): {}", r.scenario, r.config.k, if r.passed() { "pass" } else { "FAIL" });
        for a in &r.assertions {
            println!("  {:<24} {} {}", a.name, a.passed, a.detail);
        }
    }
    Ok(())
}

fn main() -> gkdv::Result<()> {
    run_example()
}
