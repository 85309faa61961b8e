use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gkdv::evolution::{self, SimOptions};
use gkdv::ground_state::{self, SharpConstantMethod};
use gkdv::harness::{self, Scenario, SimConfig};
use gkdv::imethod::{self, IMethodParams};
use gkdv::invariants::{self, ClosedForm};
use gkdv::spectral::{Field, Grid};

#[derive(Parser)]
#[command(name = "gkdv", version, about = "gKdV simulator and diagnostics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named scenario on one or more configs (concurrently).
    Scenario {
        name: String,
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Critical and Strichartz exponents as a one-row CSV.
    Exponents {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Ground-state norms, identities and sharp constant.
    Groundstate {
        #[arg(long)]
        k: u32,
        /// Also write the sampled profile to DIR/ground_state_k<K>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold classification of initial data.
    Threshold {
        #[arg(long)]
        k: u32,
        /// `gaussian:amplitude=A,width=W,center=C`, `ground_state:amplitude=A,scale=S`
        /// or `file:PATH` (a checkpoint).
        #[arg(long)]
        init: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "L")]
        length: Option<f64>,
    },
    /// Integrate a config and write the invariant series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Almost-conservation sweep over imethod.N_list.
    ImethodSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iteration schedule of the global argument.
    GwpSchedule {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Search for a resonance witness.
    Resonance {
        #[arg(long)]
        k: u32,
        #[arg(long = "N")]
        n: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

fn load(path: &PathBuf, out: &Option<PathBuf>) -> gkdv::Result<SimConfig> {
    let mut c = SimConfig::load(path)?;
    if let Some(o) = out {
        c.output_dir = o.clone();
    }
    Ok(c)
}

fn parse_init(spec: &str, k: u32, grid: &Grid) -> gkdv::Result<Field> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if kind == "file" {
        return Ok(evolution::load_checkpoint(rest.as_ref())?.field);
    }
    let mut get = std::collections::HashMap::new();
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (key, v) = kv
            .split_once('=')
            .ok_or_else(|| gkdv::Error::Config(format!("bad init parameter '{kv}'")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| gkdv::Error::Config(format!("bad number '{v}'")))?;
        get.insert(key.to_string(), v);
    }
    let p = |key: &str, d: f64| get.get(key).copied().unwrap_or(d);
    let cf = match kind {
        "gaussian" => ClosedForm::Gaussian {
            amplitude: p("amplitude", 1.0),
            width: p("width", 1.0),
            center: p("center", 0.0),
        },
        "ground_state" => ClosedForm::ScaledGroundState {
            k,
            amplitude: p("amplitude", 1.0),
            dilation: p("scale", 1.0),
        },
        _ => return Err(gkdv::Error::Config(format!("unknown init kind '{kind}'"))),
    };
    Ok(cf.sample(grid))
}

fn run(cmd: Cmd) -> gkdv::Result<bool> {
    match cmd {
        Cmd::Scenario { name, configs, out, workers } => {
            let sc: Scenario = name.parse()?;
            let jobs = configs
                .iter()
                .map(|p| load(p, &out).map(|c| (sc, c)))
                .collect::<gkdv::Result<Vec<_>>>()?;
            let reports = harness::sweep(&jobs, workers)?;
            let mut ok = true;
            for r in &reports {
                if let Some(e) = &r.error {
                    println!("{sc}: error: {e}");
                }
                for a in &r.assertions {
                    println!("{sc}: {} {} ({})", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
                }
                ok &= r.passed();
            }
            Ok(ok)
        }
        Cmd::Exponents { k, s } => {
            let t = invariants::critical_exponents(k, s)?;
            let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
            println!("k,s,s_k,alpha_k,beta_k,gamma_k,p_k,q_k,gwp_threshold,growth_exponent");
            println!(
                "{},{},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{}",
                t.k, opt(t.s), t.s_k, t.alpha_k, t.beta_k, opt(t.gamma_k), t.p_k, t.q_k,
                t.gwp_threshold, opt(t.growth_exponent)
            );
            Ok(true)
        }
        Cmd::Groundstate { k, out } => {
            let grid = ground_state::default_grid(k);
            let prof = ground_state::ground_state_profile(k, &grid)?;
            let res = ground_state::ode_residual(&prof);
            let kopt = ground_state::sharp_gn_constant(k, SharpConstantMethod::ViaPsi)?;
            println!("k,mass,grad_sq,lkp2,energy,ode_residual,kopt");
            println!(
                "{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                prof.mass, prof.grad_sq, prof.lkp2, prof.energy, res, kopt
            );
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                let mut s = String::from("x,q\n");
                for (x, q) in grid.points().iter().zip(prof.samples.values()) {
                    s.push_str(&format!("{x:.16e},{q:.16e}\n"));
                }
                std::fs::write(dir.join(format!("ground_state_k{k}.csv")), s)?;
            }
            Ok(res <= 1e-10)
        }
        Cmd::Threshold { k, init, n, length } => {
            let grid = match (n, length) {
                (None, None) => ground_state::default_grid(k),
                (n, l) => Grid::new(n.unwrap_or(1024), l.unwrap_or(64.0))?,
            };
            let f = parse_init(&init, k, &grid)?;
            let r = invariants::threshold_report(&f, k)?;
            print!("{}", harness::threshold_csv(&r));
            Ok(true)
        }
        Cmd::Simulate { config, out } => {
            let c = load(&config, &out)?;
            let u0 = c.initial_field()?;
            let mut o = SimOptions::new(c.t_final);
            o.record_every = c.record_every;
            o.s_track = c.s_track;
            o.dt_override = c.dt_override;
            if let Some(s) = c.imethod_s {
                o.imethod = c
                    .imethod_n_list
                    .iter()
                    .map(|&n| IMethodParams::new(n, s))
                    .collect::<gkdv::Result<_>>()?;
            }
            let series = evolution::simulate(&u0, c.params()?, &o)?;
            let dir = c.resolved_output_dir();
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("series.csv");
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            std::fs::write(&path, buf)?;
            println!("wrote {} ({} records, {} steps)", path.display(), series.len(), series.steps);
            if let Some(t) = series.blowup_time {
                println!("blow-up detected at t = {t}");
            }
            Ok(!series.under_resolved)
        }
        Cmd::ImethodSweep { config, out } => {
            let c = load(&config, &out)?;
            let r = harness::run_scenario(Scenario::ImethodSweep, &c)?;
            let csv = std::fs::read_to_string(c.resolved_output_dir().join("imethod-sweep.csv"))?;
            print!("{csv}");
            for a in &r.assertions {
                println!("# {} {} ({})", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
            }
            Ok(r.passed())
        }
        Cmd::GwpSchedule { k, s, t } => {
            let sch = imethod::iteration_schedule(k, s, t)?;
            print!("{}", harness::schedule_csv(&sch));
            Ok(true)
        }
        Cmd::Resonance { k, n, s, budget } => {
            let p = IMethodParams::new(n, s)?;
            match imethod::resonance_search(k, &p, budget)? {
                Some(w) => {
                    print!("{}", harness::witness_csv(&w));
                    println!(
                        "# sum = {:e}, cube_sum = {:e}, normalized = {:e}",
                        w.sum, w.cube_sum, w.normalized
                    );
                    Ok(true)
                }
                None => {
                    println!("# no witness within budget");
                    Ok(false)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
