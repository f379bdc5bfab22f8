use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sim::{Bits, LampKind, LineWreathWalk, OriginChain};
use super::{fit_exponent, mean_stderr, sorted_grid, ExponentFit};
use crate::error::{domain, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::rng::stream_rng;
use crate::stats::wilson_interval;
use crate::walk::{line_measure, sws_measure, BaseStep, FiniteMeasure, StepLawZ, StepLawZ2};

/// Mean word length `L(n)` on a grid of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftCurve {
    pub group: String,
    pub grid: Vec<usize>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
    pub exponent: Option<ExponentFit>,
    /// The length is a surrogate upper bound (`Z² ≀ F`), not the word metric.
    pub upper_bound_metric: bool,
}

/// One trajectory: lengths at each checkpoint.
fn lengths_along<F: FnMut(usize) -> (u64, bool)>(grid: &[usize], mut advance_to: F) -> Vec<(u64, bool)> {
    grid.iter().map(|&n| advance_to(n)).collect()
}

fn standard_measure(desc: &GroupDescriptor) -> Result<FiniteMeasure<f64>> {
    match desc {
        GroupDescriptor::Lattice { dim: 1 } => Ok(line_measure(&StepLawZ::lazy())),
        GroupDescriptor::Wreath { base_dim: 1, .. } => sws_measure(desc, &BaseStep::Line(StepLawZ::lazy())),
        GroupDescriptor::Wreath { base_dim: 2, .. } => sws_measure(desc, &BaseStep::Plane(StepLawZ2::lazy())),
        GroupDescriptor::Free { .. } => FiniteMeasure::uniform(desc.generators()),
        _ => Err(domain(format!("no standard walk for {desc:?}"))),
    }
}

/// Monte Carlo `E[l(X_n)]` for the standard walk on `desc`, with a fitted exponent.
///
/// Each trajectory is run once to the largest grid time and read off at every
/// grid point, so the curve is a monotone coupling across `n`.
pub fn drift_curve(desc: &GroupDescriptor, n_grid: &[usize], samples: usize, seed: u64) -> Result<DriftCurve> {
    let grid = sorted_grid(n_grid);
    let n_max = grid.last().copied().unwrap_or(0);
    let per_sample: Vec<Vec<(u64, bool)>> = match desc {
        GroupDescriptor::Lattice { dim } if *dim <= 2 => {
            let dim = *dim;
            (0..samples)
                .into_par_iter()
                .map(|k| {
                    let mut bits = Bits::new(stream_rng(seed, k as u64));
                    let (mut x, mut y, mut t) = (0i64, 0i64, 0usize);
                    lengths_along(&grid, |n| {
                        while t < n {
                            if dim == 1 {
                                x += bits.lazy();
                            } else {
                                let (dx, dy) = bits.lazy_plane();
                                x += dx;
                                y += dy;
                            }
                            t += 1;
                        }
                        ((x.abs() + y.abs()) as u64, true)
                    })
                })
                .collect()
        }
        GroupDescriptor::Free { rank } => {
            let two_m = 2 * *rank as u64;
            (0..samples)
                .into_par_iter()
                .map(|k| {
                    let mut rng = stream_rng(seed, k as u64);
                    let (mut l, mut t) = (0u64, 0usize);
                    lengths_along(&grid, |n| {
                        use rand::Rng;
                        while t < n {
                            if l == 0 || rng.gen_range(0..two_m) != 0 {
                                l += 1;
                            } else {
                                l -= 1;
                            }
                            t += 1;
                        }
                        (l, true)
                    })
                })
                .collect()
        }
        GroupDescriptor::Wreath { base_dim: 1, lamp } if matches!(**lamp, GroupDescriptor::Finite(_) | GroupDescriptor::Lattice { dim: 1 }) => {
            let kind = match lamp.as_ref() {
                GroupDescriptor::Finite(g) => LampKind::Finite(g.clone()),
                _ => LampKind::Integer,
            };
            (0..samples)
                .into_par_iter()
                .map(|k| {
                    let mut bits = Bits::new(stream_rng(seed, k as u64));
                    let mut walk = LineWreathWalk::new(kind.clone(), n_max);
                    let mut t = 0;
                    lengths_along(&grid, |n| {
                        while t < n {
                            walk.step(&mut bits);
                            t += 1;
                        }
                        (walk.length(), true)
                    })
                })
                .collect()
        }
        _ => {
            let mu = standard_measure(desc)?;
            let atoms: Vec<&GroupElement> = mu.iter().map(|(g, _)| g).collect();
            let dist = WeightedIndex::new(mu.iter().map(|(_, w)| *w)).map_err(|e| domain(e.to_string()))?;
            (0..samples)
                .into_par_iter()
                .map(|k| {
                    let mut rng = stream_rng(seed, k as u64);
                    let mut x = desc.identity();
                    let mut t = 0;
                    lengths_along(&grid, |n| {
                        while t < n {
                            x = desc.multiply(&x, atoms[dist.sample(&mut rng)]).expect("standard measure lives on desc");
                            t += 1;
                        }
                        let l = desc.word_length(&x);
                        (l.value, l.exact)
                    })
                })
                .collect()
        }
    };
    let mut mean = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    let mut exact = true;
    for i in 0..grid.len() {
        let (m, se) = mean_stderr(per_sample.iter().map(|s| s[i].0 as f64));
        exact &= per_sample.iter().all(|s| s[i].1);
        mean.push(m);
        stderr.push(se);
    }
    let exponent = fit_exponent(&grid, &mean, &stderr);
    Ok(DriftCurve {
        group: format!("{desc:?}"),
        grid,
        mean,
        stderr,
        samples,
        exponent,
        upper_bound_metric: !exact,
    })
}

/// `E[|X_n(e, j)|]`, the innermost `Z` value at the base point chain of the
/// iterated wreath product of depth `j`, plus the outer visit count `L_0(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerDriftCurve {
    pub depth: usize,
    pub grid: Vec<usize>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub visits_mean: Vec<f64>,
    pub visits_stderr: Vec<f64>,
    pub samples: usize,
    pub exponent: Option<ExponentFit>,
    pub visits_exponent: Option<ExponentFit>,
}

pub fn inner_value_drift(depth: usize, n_grid: &[usize], samples: usize, seed: u64) -> Result<InnerDriftCurve> {
    if !(1..=2).contains(&depth) {
        return Err(domain("inner_value_drift supports depth 1 or 2"));
    }
    let grid = sorted_grid(n_grid);
    let per_sample: Vec<Vec<(u64, u64)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut bits = Bits::new(stream_rng(seed, k as u64));
            let mut chain = OriginChain::new(depth);
            let mut t = 0;
            grid.iter()
                .map(|&n| {
                    while t < n {
                        chain.step(&mut bits);
                        t += 1;
                    }
                    (chain.value.unsigned_abs(), chain.outer_visits)
                })
                .collect()
        })
        .collect();
    let mut out = InnerDriftCurve {
        depth,
        grid: grid.clone(),
        mean: vec![],
        stderr: vec![],
        visits_mean: vec![],
        visits_stderr: vec![],
        samples,
        exponent: None,
        visits_exponent: None,
    };
    for i in 0..grid.len() {
        let (m, se) = mean_stderr(per_sample.iter().map(|s| s[i].0 as f64));
        out.mean.push(m);
        out.stderr.push(se);
        let (m, se) = mean_stderr(per_sample.iter().map(|s| s[i].1 as f64));
        out.visits_mean.push(m);
        out.visits_stderr.push(se);
    }
    out.exponent = fit_exponent(&grid, &out.mean, &out.stderr);
    out.visits_exponent = fit_exponent(&grid, &out.visits_mean, &out.visits_stderr);
    Ok(out)
}

/// Frequency of an event over independent trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventEstimate {
    pub hits: u64,
    pub samples: u64,
    pub probability: f64,
    /// 95% Wilson interval.
    pub interval: (f64, f64),
}

impl EventEstimate {
    pub fn new(hits: u64, samples: u64) -> Self {
        EventEstimate {
            hits,
            samples,
            probability: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
            interval: wilson_interval(hits, samples, 1.96),
        }
    }
}

/// `P[∃y: |f_n(y)| ≥ C√(n ln n)]` for the switch-walk-switch walk on `Z ≀ Z`.
pub fn lamp_height_event(n: usize, c: f64, samples: usize, seed: u64) -> Result<EventEstimate> {
    if !(c > 0.0) {
        return Err(domain("lamp_height_event needs C > 0"));
    }
    let threshold = c * (n as f64 * (n as f64).ln().max(0.0)).sqrt();
    let hits: Vec<bool> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut bits = Bits::new(stream_rng(seed, k as u64));
            let mut walk = LineWreathWalk::new(LampKind::Integer, n);
            for _ in 0..n {
                walk.step(&mut bits);
            }
            (walk.lo..=walk.hi).any(|y| walk.lamp(y).abs() as f64 >= threshold)
        })
        .collect();
    Ok(EventEstimate::new(hits.iter().filter(|&&h| h).count() as u64, samples as u64))
}
