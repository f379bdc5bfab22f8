//! Exact laws for the simple walk on the free group `F_m` with its free basis.
//!
//! The walk is radial: `μ^{*n}(g)` depends on `g` only through `l(g)`, so every
//! quantity here reduces to the length chain in [`reflected_radial_table`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::group::FreeWord;
use crate::stats::levy_distance;
use crate::walk::{reflected_radial_table, RadialTable};
use crate::weight::Weight;


/// Sphere sizes of `F_m`: `v(0) = 1`, `v(l) = 2m(2m−1)^{l−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereSizes {
    pub m: usize,
}

impl SphereSizes {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(domain("free rank must be at least 2"));
        }
        Ok(SphereSizes { m })
    }

    pub fn get<W: Weight>(&self, l: usize) -> W {
        if l == 0 {
            return W::one();
        }
        let two_m = 2 * self.m as i64;
        W::from_ratio(two_m, 1).mul_ref(&W::powi(two_m - 1, l as i64 - 1))
    }

    /// `ln v(l)`.
    pub fn ln(&self, l: usize) -> f64 {
        if l == 0 {
            return 0.0;
        }
        let two_m = 2.0 * self.m as f64;
        two_m.ln() + (l - 1) as f64 * (two_m - 1.0).ln()
    }

    /// `Σ_{l ≤ r} v(l)`.
    pub fn ball<W: Weight>(&self, r: usize) -> W {
        let mut t = W::zero();
        for l in 0..=r {
            t.add_assign_ref(&self.get(l));
        }
        t
    }
}

/// Law of the cancellation depth of a long product: `ν(k) = 1/v(k) − 1/v(k+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationLaw {
    pub m: usize,
}

impl CancellationLaw {
    pub fn new(m: usize) -> Result<Self> {
        SphereSizes::new(m).map(|_| CancellationLaw { m })
    }

    fn sizes(&self) -> SphereSizes {
        SphereSizes { m: self.m }
    }

    pub fn atom<W: Weight>(&self, k: usize) -> W {
        self.tail::<W>(k) - self.tail::<W>(k + 1)
    }

    /// `P[K ≥ k] = 1/v(k)`.
    pub fn tail<W: Weight>(&self, k: usize) -> W {
        W::one() / self.sizes().get::<W>(k)
    }

    /// `1 − Σ_{j<k} ν(j)`; equals [`tail`](Self::tail).
    pub fn tail_by_sum<W: Weight>(&self, k: usize) -> W {
        let mut t = W::one();
        for j in 0..k {
            t = t - self.atom::<W>(j);
        }
        t
    }

    /// `ν(0), …, ν(k_max − 1)` followed by the remaining mass `1/v(k_max)`.
    pub fn atoms<W: Weight>(&self, k_max: usize) -> Vec<W> {
        let mut v: Vec<W> = (0..k_max).map(|k| self.atom(k)).collect();
        v.push(self.tail(k_max));
        v
    }
}

/// `μ^{*n}` on `F_m` in radial form.
#[derive(Debug, Clone)]
pub struct FreeWalkLaw<W> {
    pub sizes: SphereSizes,
    pub table: RadialTable<W>,
}

impl<W: Weight> FreeWalkLaw<W> {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Ok(FreeWalkLaw {
            sizes: SphereSizes::new(m)?,
            table: reflected_radial_table(m, n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.table.n
    }

    /// Probability of any one element of length `l`: `P[X_n = l] / v(l)`.
    pub fn point(&self, l: usize) -> W {
        let p = self.table.get(l);
        if p.is_zero() {
            return p;
        }
        if W::MODE == crate::WeightMode::Float {
            // v(l) overflows a float long before P[X_n = l]/v(l) underflows
            return W::from_f64((p.ln() - self.sizes.ln(l)).exp());
        }
        p / self.sizes.get::<W>(l)
    }

    /// `μ^{*n}(B(e, r))`.
    pub fn ball_mass(&self, r: usize) -> W {
        let mut t = W::zero();
        for l in 0..=r.min(self.n()) {
            t.add_assign_ref(&self.table.get(l));
        }
        t
    }

    /// `P[l(gh) ≤ l(g) + l(h) − 2k]` for any fixed `h` with `l(h) ≥ k`, that is,
    /// the probability that the last `k` letters of `g` cancel against `h`.
    ///
    /// Given `l(g) = L`, `g` is uniform on its sphere, so the last `k ≤ L` letters
    /// match `h⁻¹` with probability `1/v(k)`, and not at all when `L < k`.
    pub fn depth_at_least(&self, k: usize) -> W {
        (W::one() - self.head(k)) / self.sizes.get::<W>(k)
    }

    /// `1/v(k) − P[depth ≥ k] = P[l(g) < k]/v(k)`, kept separate so it stays
    /// accurate in float mode.
    pub fn depth_deviation(&self, k: usize) -> W {
        self.head(k) / self.sizes.get::<W>(k)
    }

    /// `P[X_n < k]`.
    fn head(&self, k: usize) -> W {
        let mut t = W::zero();
        for l in 0..k.min(self.n() + 1) {
            t.add_assign_ref(&self.table.get(l));
        }
        t
    }
}

fn check_depth(h: &FreeWord, k: usize, m: usize) -> Result<()> {
    if h.letters().iter().any(|&x| x.unsigned_abs() as usize > m) {
        return Err(domain(format!("word {h} uses a letter outside F_{m}")));
    }
    if k > h.len() {
        return Err(domain(format!("cancellation depth {k} exceeds l(h) = {}", h.len())));
    }
    Ok(())
}

/// `μ^{*n}(g)` for any `g` of length `l`.
pub fn free_point_probability<W: Weight>(m: usize, n: usize, l: usize) -> Result<W> {
    Ok(FreeWalkLaw::<W>::new(m, n)?.point(l))
}

/// `P_{g∼μ^{*n}}[l(gh) < l(g) + l(h) − 2k]`, i.e. cancellation depth at least `k + 1`.
pub fn cancellation_probability<W: Weight>(m: usize, n: usize, h: &FreeWord, k: usize) -> Result<W> {
    check_depth(h, k, m)?;
    if k == h.len() {
        return Ok(W::zero());
    }
    Ok(FreeWalkLaw::<W>::new(m, n)?.depth_at_least(k + 1))
}

/// `P_{g∼μ^{*n}}[l(gh) ≤ l(g) + l(h) − 2k]`, i.e. cancellation depth at least `k`.
/// Its limit is `1/v(k)`.
pub fn cancellation_depth_probability<W: Weight>(m: usize, n: usize, h: &FreeWord, k: usize) -> Result<W> {
    check_depth(h, k, m)?;
    Ok(FreeWalkLaw::<W>::new(m, n)?.depth_at_least(k))
}

/// `ln P[X_n = l]` for the radial chain, computed in log space so that the
/// exponentially small short lengths stay representable.
pub fn ln_radial_law(m: usize, n: usize) -> Result<Vec<f64>> {
    SphereSizes::new(m)?;
    let two_m = 2.0 * m as f64;
    let (ln_down, ln_up) = ((1.0 / two_m).ln(), ((two_m - 1.0) / two_m).ln());
    let mut p = vec![f64::NEG_INFINITY; n + 2];
    p[0] = 0.0;
    let mut next = p.clone();
    for k in 0..n {
        for v in next.iter_mut().take(k + 2) {
            *v = f64::NEG_INFINITY;
        }
        for l in (k % 2..=k).step_by(2) {
            let q = p[l];
            if l == 0 {
                next[1] = log_add(next[1], q);
            } else {
                next[l - 1] = log_add(next[l - 1], q + ln_down);
                next[l + 1] = log_add(next[l + 1], q + ln_up);
            }
        }
        std::mem::swap(&mut p, &mut next);
    }
    p.truncate(n + 1);
    Ok(p)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1/v(k) − P[l(gh) ≤ l(g) + l(h) − 2k])`; `−∞` for `k = 0`.
pub fn ln_cancellation_deviation(m: usize, n: usize, k: usize) -> Result<f64> {
    let ln_p = ln_radial_law(m, n)?;
    let head = ln_p.iter().take(k).fold(f64::NEG_INFINITY, |acc, &x| log_add(acc, x));
    Ok(head - SphereSizes { m }.ln(k))
}

/// One atom of the ratio law: all `g` with `l(g) = length` and cancellation depth
/// `depth` against `g_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioAtom<W> {
    pub length: usize,
    pub depth: usize,
    pub mass: W,
    /// `None` where the denominator vanishes.
    pub ratio: Option<W>,
    /// `log_{2m−1}` of the ratio.
    pub log_ratio: Option<f64>,
}

/// Law of `μ^{*n}(g) / μ^{*n'}(g g_n)` under `g ∼ μ^{*n}`.
///
/// The walk has period two, so for odd `l(g_n)` the denominator is taken at the
/// parity-matched time `n' = n + 1`; otherwise `n' = n`.
#[derive(Debug, Clone)]
pub struct RatioLaw<W> {
    pub m: usize,
    pub n: usize,
    pub denominator_time: usize,
    pub increment_length: usize,
    pub atoms: Vec<RatioAtom<W>>,
    /// Mass of `g` whose denominator is zero.
    pub undefined_mass: W,
}

impl<W: Weight> RatioLaw<W> {
    /// Exact law on the `log_{2m−1}` scale, defined atoms only.
    pub fn log_atoms(&self) -> Vec<(f64, f64)> {
        self.atoms
            .iter()
            .filter_map(|a| a.log_ratio.map(|x| (x, a.mass.to_f64())))
            .collect()
    }

    /// Limit law on the same scale: `l(g_n) − 2K`, `K ∼ ν_m`.
    pub fn limit_log_atoms(&self) -> Vec<(f64, f64)> {
        limit_log_atoms(self.m, self.increment_length)
    }

    pub fn levy_to_limit(&self) -> f64 {
        levy_distance(&self.log_atoms(), &self.limit_log_atoms())
    }
}

/// `(l − 2k, ν_m(k))` for `k < l + 40`, plus the remaining mass at the last point.
pub fn limit_log_atoms(m: usize, l: usize) -> Vec<(f64, f64)> {
    let law = CancellationLaw { m };
    let k_max = l + 40;
    law.atoms::<f64>(k_max)
        .into_iter()
        .enumerate()
        .map(|(k, p)| (l as f64 - 2.0 * k as f64, p))
        .collect()
}

/// Exact law of the ratio `μ^{*n}(g)/μ^{*n'}(g g_n)`; depends on `g_n` only
/// through its length.
pub fn ratio_distribution<W: Weight>(m: usize, n: usize, g_n: &FreeWord) -> Result<RatioLaw<W>> {
    let ell = g_n.len();
    if ell == 0 {
        return Err(domain("ratio_distribution needs l(g_n) ≥ 1"));
    }
    check_depth(g_n, 0, m)?;
    let num = FreeWalkLaw::<W>::new(m, n)?;
    let n_den = n + ell % 2;
    let den = if n_den == n { num.clone() } else { FreeWalkLaw::<W>::new(m, n_den)? };
    let sizes = num.sizes;
    let ln_base = ((2 * m - 1) as f64).ln();
    let mut atoms = Vec::new();
    let mut undefined = W::zero();
    for length in (n % 2..=n).step_by(2) {
        let p_l = num.table.get(length);
        if p_l.is_zero() {
            continue;
        }
        let top = length.min(ell);
        for depth in 0..=top {
            // P[depth exactly | L]: uniform last letters, matched 1/v(j) deep
            let cond = if depth == top {
                W::one() / sizes.get::<W>(depth)
            } else {
                W::one() / sizes.get::<W>(depth) - W::one() / sizes.get::<W>(depth + 1)
            };
            let mass = p_l.mul_ref(&cond);
            let target = length + ell - 2 * depth;
            let p_t = den.table.get(target);
            if p_t.is_zero() {
                undefined.add_assign_ref(&mass);
                atoms.push(RatioAtom { length, depth, mass, ratio: None, log_ratio: None });
                continue;
            }
            // μ(g)/μ(g g_n) = [p(L)/p'(L')] · v(L')/v(L)
            let ln_ratio = p_l.ln() - p_t.ln() + sizes.ln(target) - sizes.ln(length);
            let ratio = if W::MODE == crate::WeightMode::Rational {
                p_l.clone() / p_t * sizes.get::<W>(target) / sizes.get::<W>(length)
            } else {
                W::from_f64(ln_ratio.exp())
            };
            atoms.push(RatioAtom { length, depth, mass, ratio: Some(ratio), log_ratio: Some(ln_ratio / ln_base) });
        }
    }
    Ok(RatioLaw {
        m,
        n,
        denominator_time: n_den,
        increment_length: ell,
        atoms,
        undefined_mass: undefined,
    })
}
