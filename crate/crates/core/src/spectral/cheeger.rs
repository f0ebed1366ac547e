//! Cheeger constant of a weighted graph, measuring sets by degree volume
//! `|W|_d = sum of weighted degrees over W` and cutting along the vertex
//! boundary: `h = inf over X of |boundary(X)|_d / min(|X|_d, |complement|_d)`.
//!
//! The exact value enumerates all nonempty proper subsets, which is only
//! sensible at desk scale; the sweep cut orders nodes by the normalized
//! Fiedler vector and gives an upper bound for larger graphs.

use crate::error::{Error, Result};
use crate::graph::{normalized_laplacian, Graph};
use crate::linalg::symmetric_eigen;
use crate::par;

/// Default brute-force cap: 2^20 subset evaluations at N = 20.
pub const DEFAULT_CHEEGER_CAP: usize = 20;

/// A Cheeger value together with the subset attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct CheegerResult {
    pub value: f64,
    /// Minimizing subset X, sorted ascending.
    pub witness: Vec<usize>,
}

/// Exact Cheeger constant by exhaustive enumeration over all nonempty proper
/// subsets. Ties break toward the subset with the smallest bitmask, so the
/// witness is deterministic.
pub fn cheeger_exact(g: &Graph, cap: usize) -> Result<CheegerResult> {
    let n = g.node_count();
    if n > cap {
        return Err(Error::CheegerCapExceeded { n, cap });
    }
    if n < 2 {
        return Err(Error::InvalidGraph("Cheeger constant needs N >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let degrees: Vec<f64> = (0..n).map(|v| g.weighted_degree(v)).collect();
    let total_volume: f64 = degrees.iter().sum();
    let last = (1usize << n) - 1;

    let best = par::min_over_range(1..last, |mask| {
        Some(ratio_for_mask(g, &degrees, total_volume, mask))
    })
    .expect("subset range nonempty");

    let witness: Vec<usize> = (0..n).filter(|&v| best.1 >> v & 1 == 1).collect();
    Ok(CheegerResult {
        value: best.0,
        witness,
    })
}

fn ratio_for_mask(g: &Graph, degrees: &[f64], total_volume: f64, mask: usize) -> f64 {
    let n = degrees.len();
    let mut inside_volume = 0.0;
    for (v, d) in degrees.iter().enumerate() {
        if mask >> v & 1 == 1 {
            inside_volume += d;
        }
    }
    let mut boundary_volume = 0.0;
    for v in 0..n {
        if mask >> v & 1 == 0 && g.neighbors(v).iter().any(|&(u, _)| mask >> u & 1 == 1) {
            boundary_volume += degrees[v];
        }
    }
    boundary_volume / inside_volume.min(total_volume - inside_volume)
}

/// Upper bound on the Cheeger constant from a Fiedler sweep cut: order nodes
/// by the degree-scaled Fiedler vector of the normalized Laplacian, then take
/// the best prefix or suffix set.
pub fn cheeger_sweep(g: &Graph) -> Result<CheegerResult> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidGraph("Cheeger sweep needs N >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let eig = symmetric_eigen(&normalized_laplacian(g)?)?;
    let fiedler = &eig.vectors[1];
    let mut order: Vec<usize> = (0..n).collect();
    // D^{-1/2} scaling turns the eigenvector into the random-walk embedding.
    let score: Vec<f64> = (0..n)
        .map(|v| fiedler[v] / g.weighted_degree(v).sqrt())
        .collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));

    let degrees: Vec<f64> = (0..n).map(|v| g.weighted_degree(v)).collect();
    let total_volume: f64 = degrees.iter().sum();

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut consider = |set: &[usize]| {
        let mut mask = vec![false; n];
        for &v in set {
            mask[v] = true;
        }
        let inside: f64 = set.iter().map(|&v| degrees[v]).sum();
        let boundary: f64 = (0..n)
            .filter(|&v| !mask[v] && g.neighbors(v).iter().any(|&(u, _)| mask[u]))
            .map(|v| degrees[v])
            .sum();
        let value = boundary / inside.min(total_volume - inside);
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            let mut witness = set.to_vec();
            witness.sort_unstable();
            best = Some((value, witness));
        }
    };
    for k in 1..n {
        consider(&order[..k]);
        consider(&order[k..]);
    }
    let (value, witness) = best.expect("at least one sweep cut");
    Ok(CheegerResult { value, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, generate_barbell, FamilyKind, FamilySpec};

    #[test]
    fn k2_cheeger_is_one() {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let r = cheeger_exact(&g, DEFAULT_CHEEGER_CAP).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c4_minimum_reached_by_opposite_pair() {
        let g = generate(&FamilySpec::new(FamilyKind::Ring), 4).unwrap();
        let r = cheeger_exact(&g, DEFAULT_CHEEGER_CAP).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        // The opposite-pair split also attains the minimum.
        let degrees: Vec<f64> = (0..4).map(|v| g.weighted_degree(v)).collect();
        let total: f64 = degrees.iter().sum();
        let opposite = super::ratio_for_mask(&g, &degrees, total, 0b0101);
        assert!((opposite - r.value).abs() < 1e-12);
    }

    #[test]
    fn barbell_witness_is_one_side() {
        let g = generate_barbell(4, 1, 1.0).unwrap();
        let r = cheeger_exact(&g, DEFAULT_CHEEGER_CAP).unwrap();
        // Minimizer separates the cliques: witness is one clique, with or
        // without the bridge node.
        let clique_a: Vec<usize> = (0..4).collect();
        let clique_b: Vec<usize> = (4..8).collect();
        let mut with_bridge_a = clique_a.clone();
        with_bridge_a.push(8);
        let mut with_bridge_b = clique_b.clone();
        with_bridge_b.push(8);
        assert!(
            [clique_a, clique_b, with_bridge_a, with_bridge_b]
                .iter()
                .any(|c| *c == r.witness),
            "witness {:?}",
            r.witness
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = generate(&FamilySpec::new(FamilyKind::Ring), 25).unwrap();
        assert!(matches!(
            cheeger_exact(&g, 20),
            Err(Error::CheegerCapExceeded { n: 25, cap: 20 })
        ));
    }

    #[test]
    fn sweep_upper_bounds_exact() {
        let cases: Vec<Graph> = vec![
            generate(&FamilySpec::new(FamilyKind::Ring), 8).unwrap(),
            generate(&FamilySpec::new(FamilyKind::Path), 9).unwrap(),
            generate(&FamilySpec::new(FamilyKind::Star), 7).unwrap(),
            generate_barbell(4, 1, 1.0).unwrap(),
            generate(&FamilySpec::new(FamilyKind::Complete), 4).unwrap(),
        ];
        for g in &cases {
            let exact = cheeger_exact(g, DEFAULT_CHEEGER_CAP).unwrap();
            let sweep = cheeger_sweep(g).unwrap();
            assert!(
                sweep.value >= exact.value - 1e-12,
                "sweep {} below exact {}",
                sweep.value,
                exact.value
            );
        }
    }

    #[test]
    fn sweep_separates_barbell_cliques() {
        let g = generate_barbell(20, 1, 1.0).unwrap();
        let r = cheeger_sweep(&g).unwrap();
        // The cut must not split either clique.
        let side_a = r.witness.iter().filter(|&&v| v < 20).count();
        let side_b = r.witness.iter().filter(|&&v| (20..40).contains(&v)).count();
        assert!(
            (side_a == 20 && side_b == 0) || (side_a == 0 && side_b == 20),
            "witness {:?}",
            r.witness
        );
    }

    #[test]
    fn k4_sweep_is_positive() {
        let g = generate(&FamilySpec::new(FamilyKind::Complete), 4).unwrap();
        let r = cheeger_sweep(&g).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
    }
}
