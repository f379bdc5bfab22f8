use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classed::{minimal_length, ClassedDistribution};
use crate::group::lamplighter_element;
use crate::rng::stream_rng;
use crate::stats::quantile;
use crate::weight::Weight;

/// Measured radius of almost invariance at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    pub n: usize,
    pub epsilon: f64,
    pub samples: usize,
    /// Largest `r` whose `(1−ε)`-quantile of worst deviation over increments of
    /// length `≤ r` is at most `ε`.
    pub radius: u64,
    /// Largest increment length examined.
    pub max_radius: u64,
    /// True when the quantile never exceeded `ε` up to `max_radius`.
    pub saturated: bool,
    /// `(r, quantile)` at every radius evaluated by the search.
    pub curve: Vec<(u64, f64)>,
    /// Worst increments at `radius + 1`, in element syntax.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusOptions {
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    /// Defaults to `⌈4√n⌉ + 8`.
    pub max_radius: Option<u64>,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        RadiusOptions {
            epsilon: 0.1,
            samples: 4096,
            seed: 0,
            max_radius: None,
        }
    }
}

/// A sampled element `h = (a, f)`: base point, class hull, and sorted lamp support.
#[derive(Debug, Clone)]
pub(crate) struct SampledElement {
    pub a: i64,
    pub l: i64,
    pub r: i64,
    pub support: Vec<i64>,
}

/// Increment `g = (i, f')` with `f'` empty or a single toggled site `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Increment {
    i: i64,
    x: Option<i64>,
}

fn increment_length(g: Increment) -> u64 {
    match g.x {
        None => g.i.unsigned_abs(),
        Some(x) => {
            let lo = x.min(0).min(g.i);
            let hi = x.max(0).max(g.i);
            (1 + 2 * (hi - lo) - g.i.abs()) as u64
        }
    }
}

/// Cumulative class masses for sampling `(a, L, R)` with probability `N · w`.
pub(crate) struct ClassSampler {
    classes: Vec<(i64, i64, i64)>,
    cum: Vec<f64>,
}

impl ClassSampler {
    pub fn new<W: Weight>(cd: &ClassedDistribution<W>) -> Self {
        let mut classes = Vec::new();
        let mut cum = Vec::new();
        let mut t = 0.0;
        for (a, l, r) in cd.hull_classes() {
            let m = cd.hull_class_mass(a, l, r).to_f64();
            if m > 0.0 {
                t += m;
                classes.push((a, l, r));
                cum.push(t);
            }
        }
        ClassSampler { classes, cum }
    }

    /// Draws a class by mass, then a uniform configuration inside it: lamp-defined
    /// endpoints carry a non-identity lamp, other sites of the hull are uniform.
    pub fn sample<R: Rng>(&self, rng: &mut R, c: usize) -> SampledElement {
        let u = rng.gen::<f64>() * self.cum.last().copied().unwrap_or(0.0);
        let k = self.cum.partition_point(|&x| x <= u).min(self.classes.len() - 1);
        let (a, l, r) = self.classes[k];
        let mut support = Vec::new();
        for y in l..=r {
            let forced = (y == l && l < a.min(0)) || (y == r && r > a.max(0));
            if forced || rng.gen_range(0..c) != 0 {
                support.push(y);
            }
        }
        SampledElement { a, l, r, support }
    }
}

/// Ratio `μ(hg)/μ(h)` from the class formula.
fn ratio_after<W: Weight>(cd: &ClassedDistribution<W>, h: &SampledElement, g: Increment, w_h: f64, ln_c: f64) -> f64 {
    let b = h.a + g.i;
    let (mut lo, mut hi) = (b.min(0), b.max(0));
    let s = &h.support;
    let (smin, smax) = match g.x {
        None => (s.first().copied(), s.last().copied()),
        Some(x) => {
            let y = h.a + x;
            match s.binary_search(&y) {
                Ok(pos) => {
                    // switched off
                    let first = if pos == 0 { s.get(1) } else { s.first() };
                    let last = if pos + 1 == s.len() {
                        if s.len() >= 2 {
                            s.get(s.len() - 2)
                        } else {
                            None
                        }
                    } else {
                        s.last()
                    };
                    (first.copied(), last.copied())
                }
                Err(_) => (
                    Some(s.first().map_or(y, |&f| f.min(y))),
                    Some(s.last().map_or(y, |&f| f.max(y))),
                ),
            }
        }
    };
    if let Some(m) = smin {
        lo = lo.min(m);
    }
    if let Some(m) = smax {
        hi = hi.max(m);
    }
    let w = match cd.scaled_weight_ref(b, lo, hi) {
        Some(w) => w.to_f64(),
        None => return 0.0,
    };
    w / w_h * (((h.r - h.l) - (hi - lo)) as f64 * ln_c).exp()
}

/// Worst deviation `|μ(hg)/μ(h) − 1|` at each increment length `0..=r_max`, with
/// the increment attaining it. Increments are base translations, optionally with
/// one lamp toggled (switched off when on, on when off).
fn worst_by_length<W: Weight>(cd: &ClassedDistribution<W>, h: &SampledElement, r_max: u64) -> Vec<(f64, Increment)> {
    let ln_c = (cd.lamp_order() as f64).ln();
    let w_h = cd.scaled_weight(h.a, h.l, h.r).to_f64();
    let mut worst = vec![(0.0, Increment { i: 0, x: None }); r_max as usize + 1];
    let r = r_max as i64;
    for i in -r..=r {
        let mut consider = |g: Increment| {
            let len = increment_length(g);
            if len > r_max {
                return;
            }
            let dev = (ratio_after(cd, h, g, w_h, ln_c) - 1.0).abs();
            let slot = &mut worst[len as usize];
            if dev > slot.0 {
                *slot = (dev, g);
            }
        };
        consider(Increment { i, x: None });
        // a site x beyond [min(0,i), max(0,i)] by `ext` costs 1 + |i| + 2 ext
        let spare = r - 1 - i.abs();
        if spare < 0 {
            continue;
        }
        let ext = spare / 2;
        for x in (i.min(0) - ext)..=(i.max(0) + ext) {
            consider(Increment { i, x: Some(x) });
        }
    }
    // prefix maxima: worst over lengths ≤ r
    for k in 1..worst.len() {
        if worst[k - 1].0 > worst[k].0 {
            worst[k] = worst[k - 1];
        }
    }
    worst
}

/// Measured radius of almost invariance of `μ^{*n}` on `Z ≀ F`.
///
/// Samples `h` exactly from `cd`, computes for every increment length `r` the
/// worst deviation over increments of length `≤ r`, and returns the largest `r`
/// whose `(1−ε)`-quantile over samples is `≤ ε`. The search runs on a dyadic grid
/// and bisects inside the bracketing interval.
pub fn radius_profile<W: Weight>(cd: &ClassedDistribution<W>, opts: &RadiusOptions) -> RadiusProfile {
    let n = cd.n;
    let eps = opts.epsilon;
    let r_max = opts
        .max_radius
        .unwrap_or_else(|| (4.0 * (n as f64).sqrt()).ceil() as u64 + 8);
    if n == 0 {
        // every g ≠ e has probability zero at time 0
        return RadiusProfile {
            n,
            epsilon: eps,
            samples: opts.samples,
            radius: 0,
            max_radius: r_max,
            saturated: r_max == 0,
            curve: vec![(0, 0.0)],
            witnesses: if r_max == 0 { vec![] } else { vec![lamplighter_element(1, &[]).to_string()] },
        };
    }
    let sampler = ClassSampler::new(cd);
    let c = cd.lamp_order();
    let per_sample: Vec<Vec<(f64, Increment)>> = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(opts.seed, k as u64);
            let h = sampler.sample(&mut rng, c);
            worst_by_length(cd, &h, r_max)
        })
        .collect();
    let quantile_at = |r: u64| -> f64 {
        let mut v: Vec<f64> = per_sample.iter().map(|w| w[r as usize].0).collect();
        v.sort_by(f64::total_cmp);
        quantile(&v, 1.0 - eps)
    };
    let mut curve = Vec::new();
    let eval = |r: u64, curve: &mut Vec<(u64, f64)>| {
        let q = quantile_at(r);
        curve.push((r, q));
        q
    };
    // dyadic bracketing
    let (mut good, mut bad): (Option<u64>, Option<u64>) = (None, None);
    let mut r = 0u64;
    loop {
        if eval(r, &mut curve) <= eps {
            good = Some(r);
        } else {
            bad = Some(r);
            break;
        }
        if r == r_max {
            break;
        }
        r = if r == 0 { 1 } else { (2 * r).min(r_max) };
    }
    let radius = match (good, bad) {
        (None, _) => 0,
        (Some(g), None) => g,
        (Some(mut g), Some(mut b)) => {
            while b - g > 1 {
                let m = (g + b) / 2;
                if eval(m, &mut curve) <= eps {
                    g = m;
                } else {
                    b = m;
                }
            }
            g
        }
    };
    curve.sort_by_key(|p| p.0);
    curve.dedup_by_key(|p| p.0);
    let saturated = bad.is_none() && good.is_some();
    let mut witnesses = Vec::new();
    if !saturated {
        let fail = if good.is_none() { 0 } else { radius + 1 };
        let mut ranked: Vec<(f64, Increment)> = per_sample.iter().map(|w| w[fail as usize]).collect();
        ranked.sort_by(|x, y| y.0.total_cmp(&x.0));
        let s = cd.lamp_group().generators()[0];
        for (dev, g) in ranked.into_iter().take(8) {
            if dev <= eps {
                break;
            }
            let lamps: Vec<(i64, usize)> = g.x.map(|x| vec![(x, s)]).unwrap_or_default();
            witnesses.push(lamplighter_element(g.i, &lamps).to_string());
        }
    }
    RadiusProfile {
        n,
        epsilon: eps,
        samples: opts.samples,
        radius,
        max_radius: r_max,
        saturated,
        curve,
        witnesses,
    }
}

/// Exact scan of `μ^{*n}(g)/μ^{*n}(e)` against word length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstancyProfile {
    pub n: usize,
    pub epsilon: f64,
    /// Largest `r` with `|μ(g)/μ(e) − 1| ≤ ε` for every `g` with `l(g) ≤ r`.
    pub radius: u64,
    /// True when every stored class up to the table width passed.
    pub saturated: bool,
    /// `(length, min ratio, max ratio)` over classes of that minimal length.
    pub decay: Vec<(u64, f64, f64)>,
}

/// Every element of a hull class shares one probability, and the class contains
/// elements of its minimal length, so scanning classes by minimal length covers
/// every `g` with `l(g) ≤ r`.
pub fn almost_constancy_profile<W: Weight>(cd: &ClassedDistribution<W>, epsilon: f64) -> ConstancyProfile {
    if cd.n == 0 {
        return ConstancyProfile {
            n: 0,
            epsilon,
            radius: 0,
            saturated: false,
            decay: vec![(0, 1.0, 1.0), (1, 0.0, 0.0)],
        };
    }
    let ln_c = (cd.lamp_order() as f64).ln();
    let w0 = cd.scaled_weight(0, 0, 0).to_f64();
    // classes wider than the table have length > width
    let len_cap = cd.width() as u64;
    let mut decay: Vec<(f64, f64)> = vec![(f64::INFINITY, f64::NEG_INFINITY); len_cap as usize + 1];
    for (a, l, r) in cd.hull_classes() {
        let len = minimal_length(a, l, r);
        if len > len_cap {
            continue;
        }
        let w = cd.scaled_weight(a, l, r).to_f64();
        let ratio = w / w0 * (-((r - l) as f64) * ln_c).exp();
        let slot = &mut decay[len as usize];
        slot.0 = slot.0.min(ratio);
        slot.1 = slot.1.max(ratio);
    }
    let mut radius = 0;
    let mut saturated = true;
    for (len, &(lo, hi)) in decay.iter().enumerate() {
        if lo.is_finite() && ((lo - 1.0).abs() > epsilon || (hi - 1.0).abs() > epsilon) {
            saturated = false;
            break;
        }
        radius = len as u64;
    }
    ConstancyProfile {
        n: cd.n,
        epsilon,
        radius,
        saturated,
        decay: decay
            .into_iter()
            .enumerate()
            .filter(|(_, (lo, _))| lo.is_finite())
            .map(|(k, (lo, hi))| (k as u64, lo, hi))
            .collect(),
    }
}
