//! `consensus-scale`: graph generation, spectral reports, consensus
//! simulation, and the scaling/fragility experiment suite.
//!
//! Node ids on the command line and in config files are 1-based; exit code
//! is 0 on success, 1 on validation errors, 2 on numerical failures.

use clap::{Args, Parser, Subcommand};
use consensus_core::dynamics::{simulate, ConsensusSystem, Event};
use consensus_core::generators::generate;
use consensus_core::graph::{read_edge_list, write_edge_list, DegreeBounds};
use consensus_core::spectral::{spectral_report, SpectralReport, DEFAULT_CHEEGER_CAP};
use consensus_core::{Error, Result};
use consensus_experiments::config::ConfigMap;
use consensus_experiments::runcfg::{
    external_to_internal, family_kind_from_parts, load_overrides, ExperimentConfig,
};
use consensus_experiments::{run_formation_demo, run_scaling_sweep, run_third_order_demo};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "consensus-scale",
    version,
    about = "Spectral scaling and grounding fragility of consensus over bounded-degree graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Graph family: path | ring | star | complete | lattice2d_torus |
    /// binary_tree | barbell | random_regular
    #[arg(long, default_value = "random_regular")]
    family: String,
    /// Degree for random_regular.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Bridge nodes for barbell.
    #[arg(long, default_value_t = 1)]
    bridge_nodes: usize,
    /// Uniform edge weight.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family member and write it as an edge list.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of nodes.
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge-list file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Spectral report (CSV row) for a graph file.
    Spectral {
        /// Edge-list file.
        #[arg(long)]
        graph: PathBuf,
        /// Ground this node (1-based) and report the grounded eigenvalue.
        #[arg(long)]
        leader: Option<usize>,
        /// Degree bound q (defaults to the observed maximum degree).
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        w_min: Option<f64>,
        #[arg(long)]
        w_max: Option<f64>,
        /// Exact-Cheeger brute-force cap.
        #[arg(long, default_value_t = DEFAULT_CHEEGER_CAP)]
        cheeger_cap: usize,
        /// Output CSV file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a consensus run described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connectivity-scaling sweep (lattice vs random regular).
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sizes; may repeat.
        #[arg(long = "N")]
        n: Vec<usize>,
        /// Seeds; may repeat.
        #[arg(long)]
        seed: Vec<u64>,
        /// Leader node (1-based) for the grounded column.
        #[arg(long)]
        leader: Option<usize>,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Vehicular formation with and without a lead vehicle.
    Formation {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Small and large sizes; may repeat.
        #[arg(long = "N")]
        n: Vec<usize>,
        /// Lead vehicle (1-based) for the grounded runs.
        #[arg(long)]
        leader: Option<usize>,
    },
    /// Third-order instability under mid-run grounding.
    #[command(name = "third-order")]
    ThirdOrder {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "N")]
        n: Option<usize>,
        /// Node to ground (1-based).
        #[arg(long)]
        leader: Option<usize>,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// `CONSENSUS_SCALE_THREADS` caps sweep parallelism.
fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    if let Ok(raw) = std::env::var("CONSENSUS_SCALE_THREADS") {
        if let Ok(threads) = raw.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            family,
            n,
            seed,
            out,
        } => {
            let kind = family_kind_from_parts(
                &family.family,
                Some(family.k),
                family.rows,
                family.cols,
                Some(family.bridge_nodes),
            )?;
            let spec = consensus_core::generators::FamilySpec {
                kind,
                seed,
                weight: family.weight,
            };
            let g = generate(&spec, n)?;
            if let Some(parent) = out.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            write_edge_list(&g, &out)?;
            println!(
                "wrote {} ({} nodes, {} edges)",
                out.display(),
                g.node_count(),
                g.edge_count()
            );
            Ok(())
        }
        Command::Spectral {
            graph,
            leader,
            q,
            w_min,
            w_max,
            cheeger_cap,
            out,
        } => {
            let g = read_edge_list(&graph)?;
            let leader = leader
                .map(|l| external_to_internal(l, "leader"))
                .transpose()?;
            let bounds = match (q, w_min, w_max) {
                (None, None, None) => None,
                _ => {
                    let observed = DegreeBounds::observed(&g)?;
                    Some(DegreeBounds::new(
                        q.unwrap_or(observed.q),
                        w_min.unwrap_or(observed.w_min),
                        w_max.unwrap_or(observed.w_max),
                    )?)
                }
            };
            let report = spectral_report(&g, leader, bounds, cheeger_cap)?;
            let text = format!("{}\n{}\n", SpectralReport::csv_header(), report.to_csv_row());
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Simulate { config, out } => cmd_simulate(&config, out.as_deref()),
        Command::Sweep {
            config,
            out,
            n,
            seed,
            leader,
        } => {
            let mut cfg = ExperimentConfig::sweep_defaults().apply(&load_overrides(config.as_deref())?)?;
            if !n.is_empty() {
                cfg.sizes = n;
            }
            if !seed.is_empty() {
                cfg.seeds = seed;
            }
            if let Some(l) = leader {
                cfg.leader = external_to_internal(l, "leader")?;
            }
            if let Some(dir) = out {
                cfg.out_dir = dir;
            }
            let report = run_scaling_sweep(&cfg)?;
            println!(
                "sweep complete: {} rows -> {}",
                report.rows.len(),
                report.csv_path.display()
            );
            Ok(())
        }
        Command::Demo { which } => match which {
            DemoCommand::Formation {
                config,
                out,
                seed,
                n,
                leader,
            } => {
                let mut cfg =
                    ExperimentConfig::formation_defaults().apply(&load_overrides(config.as_deref())?)?;
                if let Some(s) = seed {
                    cfg.seeds = vec![s];
                }
                if !n.is_empty() {
                    cfg.sizes = n;
                }
                if let Some(l) = leader {
                    cfg.leader = external_to_internal(l, "leader")?;
                }
                if let Some(dir) = out {
                    cfg.out_dir = dir;
                }
                let report = run_formation_demo(&cfg)?;
                for r in &report.runs {
                    println!(
                        "N={:<4} {:<10} settling {:.2} s after the event (peak {:.3})",
                        r.n,
                        if r.grounded { "grounded" } else { "leaderless" },
                        r.settling_after_event,
                        r.peak_deviation
                    );
                }
                for (n, ratio) in &report.ratios {
                    println!("N={n}: grounded/leaderless settling ratio = {ratio:.2}");
                }
                Ok(())
            }
            DemoCommand::ThirdOrder {
                config,
                out,
                seed,
                n,
                leader,
            } => {
                let mut cfg =
                    ExperimentConfig::third_order_defaults().apply(&load_overrides(config.as_deref())?)?;
                if let Some(s) = seed {
                    cfg.seeds = vec![s];
                }
                if let Some(n) = n {
                    cfg.sizes = vec![n];
                }
                if let Some(l) = leader {
                    cfg.leader = external_to_internal(l, "leader")?;
                }
                if let Some(dir) = out {
                    cfg.out_dir = dir;
                }
                let report = run_third_order_demo(&cfg)?;
                for (seed, gl1) in &report.resampled {
                    println!("seed {seed} rejected: grounded eigenvalue {gl1:.4} not in the unstable regime");
                }
                println!(
                    "seed {}: lambda2 = {:.4}, grounded lambda1 = {:.4} (threshold {})",
                    report.seed, report.lambda2, report.grounded_lambda1, report.threshold
                );
                println!(
                    "attenuation ratio {:.4}, divergence ratio {:.1}, max Re eig grounded = {:.4}",
                    report.attenuation_ratio, report.divergence_ratio, report.max_real_part_grounded
                );
                Ok(())
            }
        },
    }
}

/// Run one simulation from a config file: graph (file or family), gains,
/// horizon, and an event script. Writes trajectory.csv, events.csv, and the
/// resolved config.
fn cmd_simulate(config_path: &Path, out: Option<&Path>) -> Result<()> {
    let map = ConfigMap::read(config_path)?;
    let out_dir = out
        .map(Path::to_path_buf)
        .or_else(|| map.get("experiment", "out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out/simulate"));

    let graph = match map.get("graph", "file") {
        Some(file) => read_edge_list(Path::new(file))?,
        None => {
            let kind = consensus_experiments::runcfg::parse_family_kind(
                &with_graph_as_family(&map)?,
                consensus_core::generators::FamilyKind::RandomRegular { k: 4 },
            )?;
            let n = map
                .parse_value::<usize>("graph", "n")?
                .ok_or_else(|| Error::InvalidInput("config [graph] needs file= or n=".into()))?;
            let spec = consensus_core::generators::FamilySpec {
                kind,
                seed: map.parse_value::<u64>("graph", "seed")?.unwrap_or(0),
                weight: map.parse_value::<f64>("graph", "weight")?.unwrap_or(1.0),
            };
            generate(&spec, n)?
        }
    };

    let gains_vec = map
        .parse_list::<f64>("gains", "a")?
        .ok_or_else(|| Error::InvalidInput("config [gains] a = ... is required".into()))?;
    let gains = match map.parse_value::<f64>("gains", "a_max")? {
        Some(cap) => consensus_core::dynamics::ConsensusGains::new(gains_vec, cap)?,
        None => consensus_core::dynamics::ConsensusGains::from_coefficients(gains_vec)?,
    };
    let leader = map
        .parse_value::<usize>("experiment", "leader")?
        .map(|l| external_to_internal(l, "leader"))
        .transpose()?;
    let sys = ConsensusSystem::new(graph, gains, leader)?;

    let t_final = map.parse_value::<f64>("sim", "t_final")?.unwrap_or(10.0);
    let dt = map.parse_value::<f64>("sim", "dt")?.unwrap_or(0.01);
    let x0 = parse_x0(&map, &sys)?;
    let events = parse_events(&map, dt)?;

    let traj = simulate(&sys, &x0, &events, t_final, dt)?;
    for w in &traj.warnings {
        eprintln!("warning: {w}");
    }
    std::fs::create_dir_all(&out_dir)?;
    let mut echo = map.clone();
    echo.set("experiment", "version", env!("CARGO_PKG_VERSION"));
    echo.write(&out_dir.join("config.resolved"))?;
    std::fs::write(out_dir.join("trajectory.csv"), traj.to_csv())?;
    std::fs::write(out_dir.join("events.csv"), traj.events_csv())?;
    println!(
        "simulated {} steps of dt = {dt}; wrote {}",
        traj.times.len() - 1,
        out_dir.display()
    );
    Ok(())
}

/// The simulate command keeps its family keys under [graph]; reuse the
/// [family] parser by re-rooting them.
fn with_graph_as_family(map: &ConfigMap) -> Result<ConfigMap> {
    let mut out = ConfigMap::default();
    for key in ["kind", "k", "rows", "cols", "bridge_nodes"] {
        if let Some(v) = map.get("graph", key) {
            out.set("family", key, v);
        }
    }
    Ok(out)
}

fn parse_x0(map: &ConfigMap, sys: &ConsensusSystem) -> Result<Vec<f64>> {
    let dim = sys.state_dim();
    match map.get("sim", "x0") {
        None => Ok(vec![0.0; dim]),
        Some(raw) => {
            let tokens: Vec<&str> = raw.split_whitespace().collect();
            match tokens.as_slice() {
                ["zeros"] => Ok(vec![0.0; dim]),
                ["random", scale] => {
                    let scale: f64 = scale
                        .parse()
                        .map_err(|_| Error::InvalidInput("bad x0 random scale".into()))?;
                    let seed = map.parse_value::<u64>("sim", "x0_seed")?.unwrap_or(0);
                    use rand::{Rng, SeedableRng};
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    Ok((0..dim).map(|_| rng.random_range(-scale..scale)).collect())
                }
                values => {
                    let parsed: Result<Vec<f64>> = values
                        .iter()
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|_| Error::InvalidInput(format!("bad x0 entry {v:?}")))
                        })
                        .collect();
                    let parsed = parsed?;
                    if parsed.len() != dim {
                        return Err(Error::InvalidInput(format!(
                            "x0 has {} entries, state dimension is {dim}",
                            parsed.len()
                        )));
                    }
                    Ok(parsed)
                }
            }
        }
    }
}

/// Event lines: `impulse <t> <node> <deriv> <delta>`,
/// `step <t> <duration> <node> <deriv> <value>`, `ground <t> <node>`.
/// Node labels are 1-based.
fn parse_events(map: &ConfigMap, _dt: f64) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for line in map.get_all("events", "event") {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::InvalidInput(format!("malformed event line {line:?}"));
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| bad()) };
        let node = |s: &str| -> Result<usize> {
            external_to_internal(s.parse().map_err(|_| bad())?, "event node")
        };
        match tok.as_slice() {
            ["impulse", t, nd, deriv, delta] => events.push(Event::Impulse {
                time: num(t)?,
                node: node(nd)?,
                deriv_order: num(deriv)? as usize,
                delta: num(delta)?,
            }),
            ["step", t, dur, nd, deriv, value] => events.push(Event::Step {
                time: num(t)?,
                duration: num(dur)?,
                node: node(nd)?,
                deriv_order: num(deriv)? as usize,
                value: num(value)?,
            }),
            ["ground", t, nd] => events.push(Event::Ground {
                time: num(t)?,
                node: node(nd)?,
            }),
            _ => return Err(bad()),
        }
    }
    Ok(events)
}
