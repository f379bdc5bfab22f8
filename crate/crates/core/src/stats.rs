//! Small statistical helpers shared by the exact and Monte Carlo modules.

use statrs::function::erf::erf;

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Sup distance between the law of `Max / scale` (given as `law[m] = P[Max = m]`)
/// and the half-normal CDF `2Φ(c) − 1`.
pub fn half_normal_sup_distance(law: &[f64], scale: f64) -> f64 {
    let g = |c: f64| erf(c / std::f64::consts::SQRT_2);
    let mut cdf = 0.0;
    let mut worst = 0.0f64;
    for (m, p) in law.iter().enumerate() {
        cdf += p;
        let left = g(m as f64 / scale);
        let right = g((m + 1) as f64 / scale);
        worst = worst.max((cdf - left).abs()).max((cdf - right).abs());
    }
    worst
}

/// Lévy distance between two distribution functions given on a common sorted grid
/// of jump points, evaluated by bisection on `h`.
///
/// `a` and `b` are lists of `(value, mass)` atoms.
pub fn levy_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let fa = Cdf::new(a);
    let fb = Cdf::new(b);
    let mut pts: Vec<f64> = fa.xs.iter().chain(fb.xs.iter()).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let ok = |h: f64| {
        // F(x − h) − h ≤ G(x) ≤ F(x + h) + h for all x; checking just left and right
        // of every jump of either function is enough since both are step functions.
        let probe = |x: f64| {
            let (g, f_lo, f_hi) = (fb.at(x), fa.at(x - h), fa.at(x + h));
            let (f, g_lo, g_hi) = (fa.at(x), fb.at(x - h), fb.at(x + h));
            f_lo - h <= g + 1e-15 && g <= f_hi + h + 1e-15 && g_lo - h <= f + 1e-15 && f <= g_hi + h + 1e-15
        };
        pts.iter().all(|&x| {
            probe(x)
                && probe(x - h)
                && probe(x + h)
                && probe(next_down(x))
                && probe(next_down(x - h))
                && probe(next_down(x + h))
        })
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if ok(0.0) {
        return 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn next_down(x: f64) -> f64 {
    x - (x.abs() * 1e-12).max(1e-12)
}

struct Cdf {
    xs: Vec<f64>,
    cum: Vec<f64>,
}

impl Cdf {
    fn new(atoms: &[(f64, f64)]) -> Self {
        let mut v: Vec<(f64, f64)> = atoms.to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut xs = Vec::with_capacity(v.len());
        let mut cum = Vec::with_capacity(v.len());
        let mut c = 0.0;
        for (x, m) in v {
            c += m;
            if xs.last() == Some(&x) {
                *cum.last_mut().unwrap() = c;
            } else {
                xs.push(x);
                cum.push(c);
            }
        }
        Cdf { xs, cum }
    }

    fn at(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&y| y <= x);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Weighted least squares fit of `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

pub fn weighted_linear_fit(x: &[f64], y: &[f64], w: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n || w.len() != n {
        return None;
    }
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
        syy += w[i] * (y[i] - my) * (y[i] - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = (0..n).map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    // with weights 1/σ², the slope variance is 1/sxx; inflate by the residual
    // scatter when it exceeds what the weights predict
    let dof = (n as f64 - 2.0).max(1.0);
    let scatter = (ss_res / dof).max(1.0);
    let slope_stderr = (scatter / sxx).sqrt();
    Some(LinearFit {
        slope,
        intercept,
        slope_stderr,
        r_squared,
    })
}

/// Least squares exponent of `y ≈ C x^α` on positive data, unweighted.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let w = vec![1.0; x.len()];
    weighted_linear_fit(&lx, &ly, &w)
}

/// Lower empirical quantile: the smallest sample `v` with at least `q·n` samples `≤ v`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let k = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levy_distance_of_shifted_point_masses() {
        let a = [(0.0, 1.0)];
        let b = [(0.3, 1.0)];
        assert!((levy_distance(&a, &b) - 0.3).abs() < 1e-9);
        let c = [(0.0, 0.5), (1.0, 0.5)];
        let d = [(0.0, 0.4), (1.0, 0.6)];
        assert!((levy_distance(&c, &d) - 0.1).abs() < 1e-9);
        assert_eq!(levy_distance(&c, &c), 0.0);
    }

    #[test]
    fn wilson_contains_the_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 100, 1.96).0, 0.0);
    }

    #[test]
    fn exact_fit() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let f = weighted_linear_fit(&x, &y, &[1.0, 2.0, 1.0, 3.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.0);
        assert_eq!(quantile(&v, 0.9), 4.0);
        assert_eq!(quantile(&v, 0.0), 1.0);
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.96) - 0.975).abs() < 1e-4);
    }
}
