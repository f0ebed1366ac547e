use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::par;
use crate::spectral::algebraic_connectivity;

/// Advisory classification of a family's connectivity scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpanderTrendLabel {
    DecayingTowardZero,
    BoundedAway,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendPoint {
    pub n: usize,
    pub lambda2: f64,
}

/// Per-size connectivity, the sequence minimum, and a heuristic label from a
/// log-log slope fit. Finite sampling cannot prove the limiting behavior,
/// which is why the caveat travels with the report.
#[derive(Debug, Clone)]
pub struct ExpanderTrendReport {
    pub points: Vec<TrendPoint>,
    pub min_lambda2: f64,
    pub loglog_slope: f64,
    pub label: ExpanderTrendLabel,
    pub caveat: &'static str,
}

pub const TREND_CAVEAT: &str =
    "label is a finite-sample heuristic; no finite computation decides the N -> infinity limit";

/// Slope threshold separating the two labels: a clean bottleneck family
/// decays like 1/N (slope -1), an expander family is flat (slope ~ 0).
const DECAY_SLOPE_THRESHOLD: f64 = -0.25;

/// Evaluate lambda_2 for the family at each size and classify the trend.
/// Sizes must be strictly ascending with at least three entries.
pub fn classify_expander_trend(spec: &FamilySpec, sizes: &[usize]) -> Result<ExpanderTrendReport> {
    if sizes.len() < 3 {
        return Err(Error::InvalidInput(
            "trend classification needs at least 3 sizes".into(),
        ));
    }
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("sizes must be strictly ascending".into()));
    }
    let lambdas = par::map_collect(sizes.to_vec(), |n| -> Result<TrendPoint> {
        let g = generate(spec, n)?;
        Ok(TrendPoint {
            n,
            lambda2: algebraic_connectivity(&g)?,
        })
    });
    let points: Vec<TrendPoint> = lambdas.into_iter().collect::<Result<_>>()?;
    let min_lambda2 = points.iter().map(|p| p.lambda2).fold(f64::INFINITY, f64::min);
    let loglog_slope = slope_fit(&points);
    let label = if loglog_slope <= DECAY_SLOPE_THRESHOLD {
        ExpanderTrendLabel::DecayingTowardZero
    } else {
        ExpanderTrendLabel::BoundedAway
    };
    Ok(ExpanderTrendReport {
        points,
        min_lambda2,
        loglog_slope,
        label,
        caveat: TREND_CAVEAT,
    })
}

/// Least-squares slope of ln(lambda2) against ln(N).
fn slope_fit(points: &[TrendPoint]) -> f64 {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.lambda2.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    num / den
}
