//! Vehicular-formation reproduction: second-order consensus with and
//! without a lead vehicle, at a small and a large network size, perturbed by
//! a sudden deceleration of one vehicle. Settling is measured in the 2%
//! band around the desired trajectory; the grounded-to-leaderless settling
//! ratio quantifies the loss of scalability under a leader.

use crate::output::{csv_string, decimate_indices, write_text};
use crate::runcfg::ExperimentConfig;
use crate::svg::{render_panel_grid, Axes, Series};
use consensus_core::dynamics::{
    settling_time, simulate, stability_report, ConsensusSystem, Event, Trajectory,
};
use consensus_core::generators::generate;
use consensus_core::{par, Error, Result};
use std::path::PathBuf;

pub const SETTLING_BAND: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct FormationRun {
    pub n: usize,
    pub grounded: bool,
    pub settling_time: f64,
    /// Settling measured from the disturbance instant.
    pub settling_after_event: f64,
    pub peak_deviation: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone)]
pub struct FormationReport {
    pub runs: Vec<FormationRun>,
    /// Grounded-to-leaderless settling ratio per size, ascending in N.
    pub ratios: Vec<(usize, f64)>,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub settling_csv_path: PathBuf,
}

pub fn run_formation_demo(cfg: &ExperimentConfig) -> Result<FormationReport> {
    cfg.validate()?;
    if cfg.gains.len() != 2 {
        return Err(Error::InvalidInput(
            "the formation demo runs second-order gains".into(),
        ));
    }
    if cfg.sizes.len() < 2 {
        return Err(Error::InvalidInput(
            "the formation demo needs a small and a large size".into(),
        ));
    }
    cfg.write_resolved()?;
    let sizes = [cfg.sizes[0], cfg.sizes[1]];
    let seed = cfg.seeds[0];
    let gains = cfg.consensus_gains()?;
    let t_event = cfg.disturbance.time;
    let magnitude = cfg.disturbance.magnitude.unwrap_or(-1.0);
    let deriv_order = cfg.disturbance.deriv_order.unwrap_or(1);

    let mut cases: Vec<(usize, bool)> = Vec::new();
    for &n in &sizes {
        cases.push((n, false));
        cases.push((n, true));
    }

    let results: Vec<(FormationRun, Trajectory)> = par::map_collect(cases, |(n, grounded)| {
        let g = generate(&cfg.family_spec(seed), n)?;
        let leader = if grounded { Some(cfg.leader) } else { None };
        let sys = ConsensusSystem::new(g, gains.clone(), leader)?;
        // Disturb the last vehicle unless overridden; never the leader.
        let node = cfg.disturbance.node.unwrap_or(n - 1);
        if Some(node) == leader {
            return Err(Error::InvalidInput(
                "disturbed node coincides with the leader".into(),
            ));
        }
        let horizon = match cfg.t_final {
            Some(t) => t,
            None => {
                // Ten slow time constants past the event covers the 2% band
                // with margin.
                let slow = stability_report(&sys)?.max_real_part;
                (t_event + 10.0 / slow.abs().max(1e-3)).clamp(30.0, 3000.0)
            }
        };
        let ev = Event::Impulse {
            time: t_event,
            node,
            deriv_order,
            delta: magnitude,
        };
        let x0 = vec![0.0; sys.state_dim()];
        let traj = simulate(&sys, &x0, &[ev], horizon, cfg.dt)?;
        // A grounded platoon is pulled back onto x* by the leader, so
        // settling is measured against the setpoints. A leaderless platoon
        // conserves its average velocity: the impulse shifts the consensus
        // trajectory permanently, and what settles is the formation around
        // the instantaneous average. Measuring the latter against x* would
        // never settle.
        let measured = if grounded {
            traj.clone()
        } else {
            center_positions(&traj)
        };
        let reference = vec![0.0; sys.agent_count()];
        let ts = settling_time(&measured, &reference, SETTLING_BAND)?;
        let start = measured.index_at(t_event);
        let mut peak: f64 = 0.0;
        for idx in start..measured.times.len() {
            for v in measured.positions_at(idx) {
                peak = peak.max(v.abs());
            }
        }
        Ok((
            FormationRun {
                n,
                grounded,
                settling_time: ts,
                settling_after_event: ts - t_event,
                peak_deviation: peak,
                horizon,
            },
            traj,
        ))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let runs: Vec<FormationRun> = results.iter().map(|(r, _)| r.clone()).collect();
    let mut ratios = Vec::new();
    for &n in &sizes {
        let leaderless = runs
            .iter()
            .find(|r| r.n == n && !r.grounded)
            .expect("leaderless run present");
        let grounded = runs
            .iter()
            .find(|r| r.n == n && r.grounded)
            .expect("grounded run present");
        ratios.push((
            n,
            grounded.settling_after_event / leaderless.settling_after_event,
        ));
    }

    // Plot data: per-run deviation trajectories, decimated. The CSV holds
    // exactly the points drawn in the SVG.
    let mut csv_rows: Vec<String> = Vec::new();
    let mut panels = Vec::new();
    for ((run, traj), label) in results.iter().zip(case_labels(&sizes)) {
        let idxs = decimate_indices(traj.times.len(), 400);
        let nodes = traj.active_nodes_at(0);
        let mut series: Vec<Series> = nodes
            .iter()
            .map(|&v| Series {
                label: format!("node {}", v + 1),
                points: Vec::with_capacity(idxs.len()),
            })
            .collect();
        for &idx in &idxs {
            let t = traj.times[idx];
            let pos = traj.positions_at(idx);
            for (slot, s) in series.iter_mut().enumerate() {
                s.points.push((t, pos[slot]));
                csv_rows.push(format!("{},{},{},{}", label, t, nodes[slot] + 1, pos[slot]));
            }
        }
        panels.push((
            series,
            Axes {
                title: format!(
                    "{} (settling {:.1} s)",
                    label, run.settling_after_event
                ),
                x_label: "t (s)".into(),
                y_label: "deviation from x* (m)".into(),
                x_log: false,
                y_log: false,
            },
        ));
    }
    // 2x2 grid mirrors the figure layout: leaderless on top, grounded below.
    panels.swap(1, 2);

    let csv_path = cfg.out_dir.join("formation.csv");
    write_text(&csv_path, &csv_string("case,t,node,deviation", &csv_rows))?;
    let svg_path = cfg.out_dir.join("formation.svg");
    write_text(&svg_path, &render_panel_grid(&panels, 2)?)?;

    let settling_rows: Vec<String> = runs
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n, r.grounded, r.peak_deviation, r.settling_time, r.settling_after_event, r.horizon
            )
        })
        .chain(
            ratios
                .iter()
                .map(|(n, ratio)| format!("{n},ratio,,,{ratio},")),
        )
        .collect();
    let settling_csv_path = cfg.out_dir.join("settling.csv");
    write_text(
        &settling_csv_path,
        &csv_string(
            "N,grounded,peak_deviation,settling_time_s,settling_after_event_s,horizon_s",
            &settling_rows,
        ),
    )?;

    Ok(FormationReport {
        runs,
        ratios,
        csv_path,
        svg_path,
        settling_csv_path,
    })
}

/// Copy of a trajectory with each sample's position block recentered on its
/// mean (the consensus-subspace projection).
fn center_positions(traj: &Trajectory) -> Trajectory {
    let mut out = traj.clone();
    for state in out.states.iter_mut() {
        let m = state.len() / traj.order;
        let mean = state[..m].iter().sum::<f64>() / m as f64;
        for v in state[..m].iter_mut() {
            *v -= mean;
        }
    }
    out
}

fn case_labels(sizes: &[usize; 2]) -> Vec<String> {
    let mut out = Vec::new();
    for &n in sizes {
        out.push(format!("N={n} leaderless"));
        out.push(format!("N={n} grounded"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn small_formation_demo_orders_ratios() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::formation_defaults();
        cfg.sizes = vec![12, 40];
        cfg.out_dir = PathBuf::from(dir.path());
        let report = run_formation_demo(&cfg).unwrap();
        assert_eq!(report.runs.len(), 4);
        for r in &report.runs {
            assert!(r.settling_after_event > 0.0);
            assert!(r.peak_deviation > 0.0);
        }
        assert!(report.ratios[0].1 > 1.0, "grounding slows settling");
        assert!(
            report.ratios[1].1 > report.ratios[0].1,
            "larger network has the worse ratio: {:?}",
            report.ratios
        );
        assert!(report.csv_path.exists());
        assert!(report.svg_path.exists());
    }

    #[test]
    fn undisturbed_equilibrium_stays_on_reference() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::formation_defaults();
        cfg.sizes = vec![12, 20];
        cfg.disturbance.magnitude = Some(0.0);
        cfg.t_final = Some(10.0);
        cfg.out_dir = PathBuf::from(dir.path());
        let report = run_formation_demo(&cfg).unwrap();
        for r in &report.runs {
            assert!(r.peak_deviation < 1e-9);
            assert_eq!(r.settling_after_event, 0.0);
        }
    }
}
