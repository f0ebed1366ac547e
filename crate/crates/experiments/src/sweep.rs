//! Connectivity-scaling sweep: algebraic connectivity of 2D torus lattices
//! against random k-regular graphs of the same size, plus the grounded
//! eigenvalue of the random graphs and its `k w / (N - 1)` upper bound.

use crate::output::{csv_string, write_text};
use crate::runcfg::ExperimentConfig;
use crate::svg::{render_svg, Axes, Series};
use consensus_core::generators::{generate, FamilyKind, FamilySpec};
use consensus_core::graph::DegreeBounds;
use consensus_core::spectral::{algebraic_connectivity, grounded_eigenvalue, grounded_eigenvalue_bound};
use consensus_core::{par, Error, Result};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub seed: u64,
    pub lambda2_lattice: f64,
    pub lambda2_random: f64,
    pub grounded_lambda1: f64,
    pub grounded_bound: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Per-size means over seeds: (N, lattice, random, grounded, bound).
    pub per_size: Vec<(usize, f64, f64, f64, f64)>,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
}

pub const SWEEP_CSV_HEADER: &str =
    "N,seed,lambda2_lattice,lambda2_random,grounded_lambda1,grounded_bound";

pub fn run_scaling_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let k = match cfg.kind {
        FamilyKind::RandomRegular { k } => k,
        _ => {
            return Err(Error::InvalidInput(
                "the scaling sweep compares lattices against random_regular".into(),
            ))
        }
    };
    cfg.validate()?;
    cfg.write_resolved()?;

    // Lattice side, one instance per size.
    let lattice_spec = FamilySpec {
        kind: FamilyKind::Lattice2dTorus {
            rows: None,
            cols: None,
        },
        seed: 0,
        weight: cfg.weight,
    };
    let lattice: Vec<(usize, f64)> = par::map_collect(cfg.sizes.clone(), |n| -> Result<_> {
        let g = generate(&lattice_spec, n)?;
        Ok((n, algebraic_connectivity(&g)?))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    // Random side, one instance per (size, seed).
    let grid: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let leader = cfg.leader;
    let bounds = DegreeBounds::new(k, cfg.weight, cfg.weight)?;
    let random: Vec<(usize, u64, f64, f64, f64)> =
        par::map_collect(grid, |(n, seed)| -> Result<_> {
            let g = generate(&cfg.family_spec(seed), n)?;
            let l2 = algebraic_connectivity(&g)?;
            let gl1 = grounded_eigenvalue(&g, leader)?;
            let bound = grounded_eigenvalue_bound(&g, &bounds, Some(leader))?.loose;
            Ok((n, seed, l2, gl1, bound))
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(random.len());
    for &(n, seed, l2, gl1, bound) in &random {
        let lattice_l2 = lattice
            .iter()
            .find(|&&(ln, _)| ln == n)
            .map(|&(_, v)| v)
            .expect("lattice value exists for every size");
        rows.push(SweepRow {
            n,
            seed,
            lambda2_lattice: lattice_l2,
            lambda2_random: l2,
            grounded_lambda1: gl1,
            grounded_bound: bound,
        });
    }
    rows.sort_by_key(|r: &SweepRow| (r.n, r.seed));

    let per_size: Vec<(usize, f64, f64, f64, f64)> = cfg
        .sizes
        .iter()
        .map(|&n| {
            let of_n: Vec<&SweepRow> = rows.iter().filter(|r| r.n == n).collect();
            let m = of_n.len() as f64;
            (
                n,
                of_n[0].lambda2_lattice,
                of_n.iter().map(|r| r.lambda2_random).sum::<f64>() / m,
                of_n.iter().map(|r| r.grounded_lambda1).sum::<f64>() / m,
                of_n[0].grounded_bound,
            )
        })
        .collect();

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n, r.seed, r.lambda2_lattice, r.lambda2_random, r.grounded_lambda1, r.grounded_bound
            )
        })
        .collect();
    let csv_path = cfg.out_dir.join("sweep.csv");
    write_text(&csv_path, &csv_string(SWEEP_CSV_HEADER, &csv_rows))?;

    // The chart plots per-size means; pair it with exactly that data.
    let curve_rows: Vec<String> = per_size
        .iter()
        .map(|(n, lat, rnd, grd, bnd)| format!("{n},{lat},{rnd},{grd},{bnd}"))
        .collect();
    write_text(
        &cfg.out_dir.join("sweep_curves.csv"),
        &csv_string(
            "N,lambda2_lattice,lambda2_random_mean,grounded_lambda1_mean,grounded_bound",
            &curve_rows,
        ),
    )?;

    let curve = |pick: fn(&(usize, f64, f64, f64, f64)) -> f64, label: &str| Series {
        label: label.into(),
        points: per_size.iter().map(|p| (p.0 as f64, pick(p))).collect(),
    };
    let series = vec![
        curve(|p| p.1, "lattice lambda2"),
        curve(|p| p.2, "random lambda2 (mean)"),
        curve(|p| p.3, "random grounded lambda1 (mean)"),
        curve(|p| p.4, "bound k w/(N-1)"),
    ];
    let axes = Axes {
        title: format!("Connectivity scaling: {}", cfg.name),
        x_label: "N".into(),
        y_label: "eigenvalue".into(),
        x_log: true,
        y_log: true,
    };
    let svg_path = cfg.out_dir.join("sweep.svg");
    write_text(&svg_path, &render_svg(&series, &axes)?)?;

    Ok(SweepReport {
        rows,
        per_size,
        csv_path,
        svg_path,
    })
}
