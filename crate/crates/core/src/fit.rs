//! Log-log slope fits and trend statistics for error curves.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {need} points in the fit window, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("non-positive value {value} at N={n}")]
    NonPositive { n: f64, value: f64 },
    #[error("all N values coincide")]
    Degenerate,
}

/// Least-squares fit `log ξ = intercept + slope · log N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the residuals in natural-log units.
    pub residual_rms: f64,
    pub points: usize,
    pub window: (f64, f64),
}

impl ScalingReport {
    pub fn predict(&self, n: f64) -> f64 {
        (self.intercept + self.slope * n.ln()).exp()
    }
}

pub const MIN_FIT_POINTS: usize = 4;

/// Fits every point whose `N` lies in `window` (inclusive); `None` uses all points.
pub fn slope_fit(points: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<ScalingReport, FitError> {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let sel: Vec<(f64, f64)> = points.iter().copied().filter(|&(n, _)| n >= lo && n <= hi).collect();
    if sel.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints { need: MIN_FIT_POINTS, got: sel.len() });
    }
    if let Some(&(n, value)) = sel.iter().find(|&&(n, v)| !(v > 0.0) || !(n > 0.0)) {
        return Err(FitError::NonPositive { n, value });
    }
    let xs: Vec<f64> = sel.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = sel.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let window = (sel.iter().map(|p| p.0).fold(f64::INFINITY, f64::min), sel.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max));
    Ok(ScalingReport { slope, intercept, residual_rms: (rss / m).sqrt(), points: sel.len(), window })
}

/// Slopes between consecutive points, reported at the geometric mean of their `N`.
pub fn local_slopes(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    points
        .windows(2)
        .filter(|w| w[0].1 > 0.0 && w[1].1 > 0.0 && w[0].0 != w[1].0)
        .map(|w| ((w[0].0 * w[1].0).sqrt(), (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln()))
        .collect()
}

/// Kendall's τ-b rank correlation; `None` when either sequence is constant.
pub fn kendall_tau(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "kendall_tau needs paired samples");
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = (xs[j] - xs[i]).partial_cmp(&0.0)? as i64;
            let dy = (ys[j] - ys[i]).partial_cmp(&0.0)? as i64;
            match (dx, dy) {
                (0, 0) => {}
                (0, _) => tx += 1,
                (_, 0) => ty += 1,
                _ if dx == dy => conc += 1,
                _ => disc += 1,
            }
        }
    }
    let denom = (((conc + disc + tx) * (conc + disc + ty)) as f64).sqrt();
    (denom > 0.0).then(|| (conc - disc) as f64 / denom)
}
