//! Monte Carlo and semi-exact estimators for groups without a class-level formula.
//!
//! Every estimator draws trajectory `k` from `stream_rng(seed, k)` and reduces in
//! sample order, so results are bit-identical for any number of worker threads.

mod cover;
mod drift;
mod nilpotent;
pub(crate) mod sim;
mod witness;

pub use cover::{
    cover_radius, cover_radius_grid, projected_translation_tv, z2f_invariance_bound, ConditioningFailure, CoverRadiusSample,
    InvarianceDiagnostic, MAX_PROJECTED_TV_N, MAX_TRAJECTORY,
};
pub use drift::{drift_curve, inner_value_drift, lamp_height_event, DriftCurve, EventEstimate, InnerDriftCurve};
pub use nilpotent::{nilpotent_check, NilpotentReport};
pub use witness::{anti_invariance_witness, WitnessOptions, WitnessReport};

use serde::{Deserialize, Serialize};

use crate::stats::{weighted_linear_fit, LinearFit};

#[cfg(test)]
mod tests;

/// Fitted power law `y ≈ C n^α` on log-log means with weights `1/SE²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub fit: LinearFit,
    /// 95% interval for the exponent.
    pub interval: (f64, f64),
    /// Set when `R² < 0.99`.
    pub flagged: bool,
}

impl ExponentFit {
    pub fn exponent(&self) -> f64 {
        self.fit.slope
    }
}

pub fn fit_exponent(grid: &[usize], mean: &[f64], stderr: &[f64]) -> Option<ExponentFit> {
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for ((&n, &m), &se) in grid.iter().zip(mean).zip(stderr) {
        if n == 0 || m <= 0.0 {
            continue;
        }
        x.push((n as f64).ln());
        y.push(m.ln());
        // delta method: SE(ln m) ≈ SE/m
        let rel = (se / m).max(1e-9);
        w.push(1.0 / (rel * rel));
    }
    let fit = weighted_linear_fit(&x, &y, &w)?;
    let half = 1.96 * fit.slope_stderr;
    Some(ExponentFit {
        fit,
        interval: (fit.slope - half, fit.slope + half),
        flagged: fit.r_squared < 0.99,
    })
}

/// Mean and standard error of the mean, summed in order.
pub(crate) fn mean_stderr(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub(crate) fn sorted_grid(grid: &[usize]) -> Vec<usize> {
    let mut g = grid.to_vec();
    g.sort_unstable();
    g.dedup();
    g
}
