use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::mean_stderr;
use super::sim::{Bits, PlaneWalk};
use crate::error::{check_cap, domain, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::rng::stream_rng;
use crate::stats::quantile;

/// Longest single trajectory accepted by the `Z²` estimators.
pub const MAX_TRAJECTORY: usize = 10_000_000;
/// Largest `n` for the exact projected translation distance.
pub const MAX_PROJECTED_TV_N: usize = 5000;

/// Largest `r` with `B(0, r) ⊆` visited set, per trajectory of the lazy walk on `Z²`
/// (`l¹` balls, the word metric).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverRadiusSample {
    pub n: usize,
    pub radii: Vec<u64>,
    /// `max_{k ≤ n} |x_k|` per trajectory.
    pub max_displacement: Vec<u64>,
    /// 10%, 50% and 90% quantiles of the radii.
    pub quantiles: (f64, f64, f64),
}

impl CoverRadiusSample {
    pub fn median(&self) -> f64 {
        self.quantiles.1
    }
}

pub fn cover_radius(n: usize, samples: usize, seed: u64) -> Result<CoverRadiusSample> {
    Ok(cover_radius_grid(&[n], samples, seed)?.remove(0))
}

/// [`cover_radius`] at every grid time from one set of trajectories; trajectory `k`
/// is the same path at every grid point.
pub fn cover_radius_grid(n_grid: &[usize], samples: usize, seed: u64) -> Result<Vec<CoverRadiusSample>> {
    let grid = super::sorted_grid(n_grid);
    let n_max = grid.last().copied().unwrap_or(0);
    check_cap("trajectory length", n_max, MAX_TRAJECTORY)?;
    let per_sample: Vec<Vec<(u64, u64)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut bits = Bits::new(stream_rng(seed, k as u64));
            let mut w = PlaneWalk::new();
            let (mut t, mut far) = (0, 0u64);
            grid.iter()
                .map(|&n| {
                    while t < n {
                        w.step(&mut bits);
                        far = far.max((w.x.abs() + w.y.abs()) as u64);
                        t += 1;
                    }
                    (w.cover, far)
                })
                .collect()
        })
        .collect();
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let radii: Vec<u64> = per_sample.iter().map(|s| s[i].0).collect();
            let mut sorted: Vec<f64> = radii.iter().map(|&r| r as f64).collect();
            sorted.sort_by(f64::total_cmp);
            let quantiles = if sorted.is_empty() {
                (0.0, 0.0, 0.0)
            } else {
                (quantile(&sorted, 0.1), quantile(&sorted, 0.5), quantile(&sorted, 0.9))
            };
            CoverRadiusSample {
                n,
                radii,
                max_displacement: per_sample.iter().map(|s| s[i].1).collect(),
                quantiles,
            }
        })
        .collect())
}

/// Failure frequencies of the coverage events used to condition the `Z² ≀ F` walk
/// for a translation of length `r'`: (1) `B(0, 2r'')` visited by time `n`,
/// (2) `B(x_n, 2r'')` visited by time `n`, (3) `B(x_{n−T}, 2r'')` visited by time
/// `n − T` and `|x_n − x_{n−T}| ≤ r''`, with `r'' = 2r'` and `T = r'²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditioningFailure {
    pub r_prime: u64,
    pub r_double_prime: u64,
    pub t: usize,
    pub fail_origin: f64,
    pub fail_endpoint: f64,
    pub fail_earlier: f64,
    pub fail_any: f64,
}

/// Bounds on `Σ_h |μ^{*n}(h) − μ^{*n}(hg)|` for the switch-walk-switch walk on `Z² ≀ F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceDiagnostic {
    pub increment: String,
    pub n: usize,
    pub upper: Option<f64>,
    pub upper_stderr: Option<f64>,
    pub lower: Option<f64>,
    pub conditioning: Option<ConditioningFailure>,
}

/// Shapes of increment accepted by [`z2f_invariance_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
enum Z2fIncrement {
    Identity,
    /// Lamp sites relative to the current position.
    LampOnly(Vec<(i64, i64)>),
    Translation(i64, i64),
}

fn classify(lamp_order: usize, g: &GroupElement) -> Result<Z2fIncrement> {
    GroupDescriptor::lamplighter_z2(lamp_order).check(g)?;
    let w = g.as_wreath().unwrap();
    let (bx, by) = (w.base[0], w.base[1]);
    match (bx == 0 && by == 0, w.support_len() == 0) {
        (true, true) => Ok(Z2fIncrement::Identity),
        (true, false) => Ok(Z2fIncrement::LampOnly(w.lamps().keys().map(|s| (s[0], s[1])).collect())),
        (false, true) => Ok(Z2fIncrement::Translation(bx, by)),
        (false, false) => Err(domain("z2f_invariance_bound takes a lamp-only increment or a translation")),
    }
}

/// Lamp-only `g = (0, f')`: given the base trajectory, lamps on visited sites are
/// independent and uniform (every visited site has been switched at least once
/// for `n ≥ 1`), so right multiplication by `g` is a bijection of each conditional
/// law once `x_n + supp f'` is visited. Hence `TV ≤ 2 P[x_n + supp f' ⊄ visited]`,
/// estimated by Monte Carlo.
///
/// Translation `g = (v, 0)`: the exact projected distance `Σ|ν^{*n}(x) − ν^{*n}(x+v)|`
/// is a lower bound; the coverage-event failure rates are reported alongside.
pub fn z2f_invariance_bound(
    lamp_order: usize,
    n: usize,
    g: &GroupElement,
    samples: usize,
    seed: u64,
) -> Result<InvarianceDiagnostic> {
    check_cap("trajectory length", n, MAX_TRAJECTORY)?;
    let mut out = InvarianceDiagnostic {
        increment: g.to_string(),
        n,
        upper: None,
        upper_stderr: None,
        lower: None,
        conditioning: None,
    };
    match classify(lamp_order, g)? {
        Z2fIncrement::Identity => {
            out.upper = Some(0.0);
            out.upper_stderr = Some(0.0);
            out.lower = Some(0.0);
        }
        Z2fIncrement::LampOnly(sites) => {
            if n == 0 {
                out.lower = Some(2.0);
                out.upper = Some(2.0);
                out.upper_stderr = Some(0.0);
                return Ok(out);
            }
            let miss: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|k| {
                    let mut bits = Bits::new(stream_rng(seed, k as u64));
                    let mut w = PlaneWalk::new();
                    for _ in 0..n {
                        w.step(&mut bits);
                    }
                    let covered = sites.iter().all(|&(dx, dy)| w.is_visited(w.x + dx, w.y + dy));
                    if covered { 0.0 } else { 2.0 }
                })
                .collect();
            let (m, se) = mean_stderr(miss.into_iter());
            out.upper = Some(m);
            out.upper_stderr = Some(se);
        }
        Z2fIncrement::Translation(vx, vy) => {
            check_cap("projected distance n", n, MAX_PROJECTED_TV_N)?;
            out.lower = Some(projected_translation_tv(n, vx, vy));
            out.conditioning = Some(conditioning_failure(n, (vx.abs() + vy.abs()) as u64, samples, seed));
        }
    }
    Ok(out)
}

fn conditioning_failure(n: usize, r_prime: u64, samples: usize, seed: u64) -> ConditioningFailure {
    let r2 = 2 * r_prime;
    let t = (r_prime * r_prime) as usize;
    let radius = 2 * r2 as i64;
    let fails: Vec<(bool, bool, bool)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut bits = Bits::new(stream_rng(seed, k as u64));
            let mut w = PlaneWalk::new();
            let early = n.checked_sub(t);
            let mut earlier = (true, 0i64, 0i64);
            for step in 0..=n {
                if Some(step) == early {
                    earlier = (!w.ball_visited(w.x, w.y, radius), w.x, w.y);
                }
                if step < n {
                    w.step(&mut bits);
                }
            }
            let f1 = !w.ball_visited(0, 0, radius);
            let f2 = !w.ball_visited(w.x, w.y, radius);
            let far = ((w.x - earlier.1).abs() + (w.y - earlier.2).abs()) as u64 > r2;
            (f1, f2, earlier.0 || far)
        })
        .collect();
    let freq = |f: &dyn Fn(&(bool, bool, bool)) -> bool| fails.iter().filter(|x| f(x)).count() as f64 / samples.max(1) as f64;
    ConditioningFailure {
        r_prime,
        r_double_prime: r2,
        t,
        fail_origin: freq(&|x| x.0),
        fail_endpoint: freq(&|x| x.1),
        fail_earlier: freq(&|x| x.2),
        fail_any: freq(&|x| x.0 || x.1 || x.2),
    }
}

/// `ln C(k, j)`.
fn ln_binom(k: usize, j: usize) -> f64 {
    ln_gamma(k as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((k - j) as f64 + 1.0)
}

/// Simple walk law `P[S_k = u]` as an array indexed by `u + k` (zero on the wrong parity).
fn simple_walk_law(k: usize, reach: i64) -> Vec<f64> {
    let ln2 = std::f64::consts::LN_2;
    (-reach..=reach)
        .map(|u| {
            if u.unsigned_abs() as usize > k || (u + k as i64) % 2 != 0 {
                0.0
            } else {
                (ln_binom(k, ((k as i64 + u) / 2) as usize) - k as f64 * ln2).exp()
            }
        })
        .collect()
}

/// `Σ_x |ν^{*n}(x) − ν^{*n}(x + v)|` for the lazy walk on `Z²`.
///
/// In the rotated coordinates `u = x + y`, `w = x − y` each non-holding step moves
/// `u` and `w` by independent signs, so `ν^{*n} = Σ_K Bin(n, 1/2)(K) s_K ⊗ s_K` with
/// `s_K` the simple walk law. `K` and the window are truncated at 12 standard
/// deviations, far below float resolution.
pub fn projected_translation_tv(n: usize, vx: i64, vy: i64) -> f64 {
    let (du, dw) = (vx + vy, vx - vy);
    let spread = |s: f64| (12.0 * s).ceil() as i64 + 2;
    let k_lo = (n as f64 / 2.0 - spread((n as f64).sqrt() / 2.0) as f64).max(0.0) as usize;
    let k_hi = ((n as f64 / 2.0 + spread((n as f64).sqrt() / 2.0) as f64) as usize).min(n);
    let reach = spread((k_hi as f64).sqrt()).min(n as i64) + du.abs().max(dw.abs());
    let width = (2 * reach + 1) as usize;
    let mut diff = vec![0.0f64; width * width];
    let ln2 = std::f64::consts::LN_2;
    for k in k_lo..=k_hi {
        let b = (ln_binom(n, k) - n as f64 * ln2).exp();
        if b < 1e-300 {
            continue;
        }
        let s = simple_walk_law(k, reach);
        let at = |u: i64| -> f64 {
            let i = u + reach;
            if i < 0 || i >= width as i64 { 0.0 } else { s[i as usize] }
        };
        for (iu, &su) in s.iter().enumerate() {
            let u = iu as i64 - reach;
            let su2 = at(u + du);
            if su == 0.0 && su2 == 0.0 {
                continue;
            }
            let row = &mut diff[iu * width..(iu + 1) * width];
            for (iw, cell) in row.iter_mut().enumerate() {
                let w = iw as i64 - reach;
                *cell += b * (su * s[iw] - su2 * at(w + dw));
            }
        }
    }
    diff.iter().map(|d| d.abs()).sum()
}
