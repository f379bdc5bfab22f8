use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_cap, domain, Result};
use crate::walk::{line_law, StepLawZ};

/// Largest `n` accepted by [`nilpotent_check`] on `Z²`.
pub const MAX_PLANE_N: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentReport {
    pub d: usize,
    pub n: usize,
    pub epsilon: f64,
    pub k: f64,
    /// `max |μ^{*n}(gh)/μ^{*n}(g) − 1|` over `l(g) ≤ K√n`, `l(h) ≤ ε√n`.
    pub max_deviation: f64,
    /// Maximising `g` and `h`.
    pub g: Vec<i64>,
    pub h: Vec<i64>,
}

/// Exact ratio deviation for the lazy walk on `Z^d`, `d ∈ {1, 2}`.
pub fn nilpotent_check(d: usize, n: usize, epsilon: f64, k: f64) -> Result<NilpotentReport> {
    let sn = (n as f64).sqrt();
    let rg = (k * sn).floor() as i64;
    let rh = (epsilon * sn).floor() as i64;
    let mut best = NilpotentReport {
        d,
        n,
        epsilon,
        k,
        max_deviation: 0.0,
        g: vec![0; d],
        h: vec![0; d],
    };
    match d {
        1 => {
            let law = line_law::<f64>(&StepLawZ::lazy(), n);
            for g in -rg..=rg {
                let p = law.get(g);
                for h in -rh..=rh {
                    let dev = (law.get(g + h) / p - 1.0).abs();
                    if dev > best.max_deviation {
                        best.max_deviation = dev;
                        best.g = vec![g];
                        best.h = vec![h];
                    }
                }
            }
        }
        2 => {
            check_cap("lattice convolution n", n, MAX_PLANE_N)?;
            let reach = (rg + rh).min(n as i64);
            let law = plane_window(n, reach);
            let side = (2 * reach + 1) as usize;
            let at = |x: i64, y: i64| law[((x + reach) as usize) * side + (y + reach) as usize];
            for gx in -rg..=rg {
                for gy in -(rg - gx.abs())..=(rg - gx.abs()) {
                    let p = at(gx, gy);
                    for hx in -rh..=rh {
                        for hy in -(rh - hx.abs())..=(rh - hx.abs()) {
                            let dev = (at(gx + hx, gy + hy) / p - 1.0).abs();
                            if dev > best.max_deviation {
                                best.max_deviation = dev;
                                best.g = vec![gx, gy];
                                best.h = vec![hx, hy];
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(domain("nilpotent_check supports d = 1 or 2")),
    }
    Ok(best)
}

/// `ν^{*n}(x, y)` of the lazy planar walk on `|x|, |y| ≤ reach`, via the rotated
/// product form `Σ_K Bin(n, 1/2)(K) s_K(x + y) s_K(x − y)`.
pub(crate) fn plane_window(n: usize, reach: i64) -> Vec<f64> {
    let side = (2 * reach + 1) as usize;
    let mut out = vec![0.0; side * side];
    let ln2 = std::f64::consts::LN_2;
    let lnb = |k: usize, j: usize| ln_gamma(k as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((k - j) as f64 + 1.0);
    let half = 12.0 * (n as f64).sqrt() / 2.0 + 2.0;
    let k_lo = (n as f64 / 2.0 - half).max(0.0) as usize;
    let k_hi = ((n as f64 / 2.0 + half) as usize).min(n);
    for k in k_lo..=k_hi {
        let ln_b = lnb(n, k) - n as f64 * ln2;
        let s = |u: i64| -> f64 {
            if u.unsigned_abs() as usize > k || (u + k as i64) % 2 != 0 {
                0.0
            } else {
                (ln_b / 2.0 + lnb(k, ((k as i64 + u) / 2) as usize) - k as f64 * ln2).exp()
            }
        };
        let su: Vec<f64> = (-2 * reach..=2 * reach).map(s).collect();
        for x in -reach..=reach {
            for y in -reach..=reach {
                let (u, w) = (x + y, x - y);
                out[((x + reach) as usize) * side + (y + reach) as usize] +=
                    su[(u + 2 * reach) as usize] * su[(w + 2 * reach) as usize];
            }
        }
    }
    out
}
