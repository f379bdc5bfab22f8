use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};

use super::step::{BaseStep, StepLawZ};
use crate::error::{check_cap, domain, Result};
use crate::group::{GroupDescriptor, GroupElement, WreathElement};
use crate::rng::stream_rng;
use crate::weight::{Weight, WeightMode};

pub const DEFAULT_SUPPORT_CAP: usize = 10_000_000;

/// Finitely supported probability measure on a group. Zero weights are never stored.
///
/// The support is ordered so that float sums are reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure<W> {
    support: BTreeMap<GroupElement, W>,
}

impl<W: Weight> FiniteMeasure<W> {
    /// Merges repeated atoms. Weights must be nonnegative and sum to one
    /// (exactly for rationals, within `1e-12` for floats).
    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, W)>) -> Result<Self> {
        let m = Self::from_pairs_unchecked(pairs);
        if m.support.values().any(|w| *w < W::zero()) {
            return Err(domain("negative weight"));
        }
        let total = m.total();
        let ok = match W::MODE {
            WeightMode::Rational => total == W::one(),
            WeightMode::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(domain(format!("weights sum to {}", total.to_f64())));
        }
        Ok(m)
    }

    fn from_pairs_unchecked(pairs: impl IntoIterator<Item = (GroupElement, W)>) -> Self {
        let mut support: BTreeMap<GroupElement, W> = BTreeMap::new();
        for (x, w) in pairs {
            support
                .entry(x)
                .and_modify(|v| v.add_assign_ref(&w))
                .or_insert(w);
        }
        support.retain(|_, w| !w.is_zero());
        FiniteMeasure { support }
    }

    pub fn point_mass(x: GroupElement) -> Self {
        FiniteMeasure {
            support: BTreeMap::from([(x, W::one())]),
        }
    }

    pub fn uniform(elements: Vec<GroupElement>) -> Result<Self> {
        let k = elements.len() as i64;
        if k == 0 {
            return Err(domain("uniform measure on an empty set"));
        }
        Self::from_pairs(elements.into_iter().map(|x| (x, W::from_ratio(1, k))))
    }

    pub fn get(&self, x: &GroupElement) -> W {
        self.support.get(x).cloned().unwrap_or_else(W::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &W)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> W {
        let mut t = W::zero();
        for w in self.support.values() {
            t.add_assign_ref(w);
        }
        t
    }

    pub fn to_f64(&self) -> FiniteMeasure<f64> {
        FiniteMeasure {
            support: self.support.iter().map(|(x, w)| (x.clone(), w.to_f64())).collect(),
        }
    }

    /// Pushforward under a map.
    pub fn map(&self, f: impl Fn(&GroupElement) -> GroupElement) -> Self {
        Self::from_pairs_unchecked(self.support.iter().map(|(x, w)| (f(x), w.clone())))
    }

    /// The measure `h ↦ μ(h g)`.
    pub fn right_shift(&self, desc: &GroupDescriptor, g: &GroupElement) -> Result<Self> {
        let gi = desc.inverse(g)?;
        let mut pairs = Vec::with_capacity(self.len());
        for (x, w) in &self.support {
            pairs.push((desc.multiply(x, &gi)?, w.clone()));
        }
        Ok(Self::from_pairs_unchecked(pairs))
    }

    /// `Σ_h μ(h) log μ(h)` negated, natural log.
    pub fn entropy(&self) -> f64 {
        self.support
            .values()
            .map(|w| {
                let p = w.to_f64();
                -p * w.ln()
            })
            .sum()
    }
}

/// Group convolution `(a * b)(z) = Σ_{xy = z} a(x) b(y)`.
pub fn convolve<W: Weight>(
    desc: &GroupDescriptor,
    a: &FiniteMeasure<W>,
    b: &FiniteMeasure<W>,
    cap: usize,
) -> Result<FiniteMeasure<W>> {
    let mut out: BTreeMap<GroupElement, W> = BTreeMap::new();
    for (x, wx) in a.iter() {
        for (y, wy) in b.iter() {
            let z = desc.multiply(x, y)?;
            let w = wx.mul_ref(wy);
            match out.get_mut(&z) {
                Some(v) => v.add_assign_ref(&w),
                None => {
                    out.insert(z, w);
                    check_cap("convolution support", out.len(), cap)?;
                }
            }
        }
    }
    out.retain(|_, w| !w.is_zero());
    Ok(FiniteMeasure { support: out })
}

/// `μ^{*n}` by repeated convolution.
pub fn convolution_power<W: Weight>(
    desc: &GroupDescriptor,
    mu: &FiniteMeasure<W>,
    n: usize,
    cap: usize,
) -> Result<FiniteMeasure<W>> {
    let mut acc = FiniteMeasure::point_mass(desc.identity());
    for _ in 0..n {
        acc = convolve(desc, &acc, mu, cap)?;
    }
    Ok(acc)
}

/// `Σ |a(x) - b(x)|` over the union of supports; ranges over `[0, 2]`.
pub fn tv_distance<W: Weight>(a: &FiniteMeasure<W>, b: &FiniteMeasure<W>) -> W {
    let mut t = W::zero();
    for (x, wa) in a.iter() {
        let d = (wa.clone() - b.get(x)).abs();
        t.add_assign_ref(&d);
    }
    for (x, wb) in b.iter() {
        if !a.support.contains_key(x) {
            t.add_assign_ref(wb);
        }
    }
    t
}

/// `tv_n = Σ_h |μ^{*n}(h) - μ^{*n}(hg)|` for `n = 0..=n_max`.
pub fn shift_tv_curve<W: Weight>(
    desc: &GroupDescriptor,
    mu: &FiniteMeasure<W>,
    g: &GroupElement,
    n_max: usize,
    cap: usize,
) -> Result<Vec<W>> {
    let mut acc = FiniteMeasure::point_mass(desc.identity());
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            acc = convolve(desc, &acc, mu, cap)?;
        }
        out.push(tv_distance(&acc, &acc.right_shift(desc, g)?));
    }
    Ok(out)
}

/// The step law as a measure on `Z`.
pub fn line_measure<W: Weight>(step: &StepLawZ) -> FiniteMeasure<W> {
    let (m, z, p) = step.weights::<W>();
    FiniteMeasure::from_pairs_unchecked([
        (GroupElement::z(-1), m),
        (GroupElement::z(0), z),
        (GroupElement::z(1), p),
    ])
}

/// Switch-walk-switch measure `μ_B * μ_A * μ_B` on a wreath product.
///
/// `μ_B` sits at the origin and is uniform on a finite lamp group, the step law
/// itself on a `Z` lamp group, and recursively the switch-walk-switch measure on
/// a wreath lamp group. `μ_A` is the base step.
pub fn sws_measure<W: Weight>(desc: &GroupDescriptor, step: &BaseStep) -> Result<FiniteMeasure<W>> {
    let (base_dim, lamp) = match desc {
        GroupDescriptor::Wreath { base_dim, lamp } => (*base_dim, lamp.as_ref()),
        _ => return Err(domain("switch-walk-switch measure needs a wreath product")),
    };
    let lamp_measure: FiniteMeasure<W> = match lamp {
        GroupDescriptor::Finite(g) => FiniteMeasure::uniform((0..g.order()).map(GroupElement::Finite).collect())?,
        GroupDescriptor::Lattice { dim: 1 } => match step {
            BaseStep::Line(s) => line_measure(s),
            BaseStep::Plane(_) => return Err(domain("Z lamps need a line step")),
        },
        GroupDescriptor::Wreath { .. } => sws_measure(lamp, step)?,
        _ => return Err(domain("unsupported lamp group for switch-walk-switch")),
    };
    let base_moves: Vec<(Vec<i64>, W)> = match (step, base_dim) {
        (BaseStep::Line(s), 1) => {
            let (m, z, p) = s.weights::<W>();
            vec![(vec![-1], m), (vec![0], z), (vec![1], p)]
        }
        (BaseStep::Plane(s), 2) => {
            let nb = W::from_rational(&s.neighbour_weight());
            vec![
                (vec![0, 0], W::from_rational(&s.p_hold)),
                (vec![1, 0], nb.clone()),
                (vec![-1, 0], nb.clone()),
                (vec![0, 1], nb.clone()),
                (vec![0, -1], nb),
            ]
        }
        _ => return Err(domain("step law dimension does not match the base group")),
    };
    let lamp_id = lamp.identity();
    let origin = vec![0; base_dim];
    let switch = |v: &GroupElement| {
        GroupElement::Wreath(WreathElement::new(origin.clone(), [(origin.clone(), v.clone())], &lamp_id))
    };
    let b: FiniteMeasure<W> = lamp_measure.map(switch);
    let a: FiniteMeasure<W> = FiniteMeasure::from_pairs_unchecked(
        base_moves
            .into_iter()
            .map(|(v, w)| (GroupElement::Wreath(WreathElement::new(v, [], &lamp_id)), w)),
    );
    let ba = convolve(desc, &b, &a, DEFAULT_SUPPORT_CAP)?;
    convolve(desc, &ba, &b, DEFAULT_SUPPORT_CAP)
}

/// `X_0 = e, X_k = X_{k-1} · ξ_k` with i.i.d. increments from `mu`.
pub fn sample_trajectory<W: Weight>(
    desc: &GroupDescriptor,
    mu: &FiniteMeasure<W>,
    n: usize,
    seed: u64,
) -> Result<Vec<GroupElement>> {
    let atoms: Vec<&GroupElement> = mu.support.keys().collect();
    let weights: Vec<f64> = mu.support.values().map(|w| w.to_f64()).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| domain(e.to_string()))?;
    let mut rng = stream_rng(seed, 0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(desc.identity());
    for _ in 0..n {
        let step = atoms[dist.sample(&mut rng)];
        let next = desc.multiply(out.last().unwrap(), step)?;
        out.push(next);
    }
    Ok(out)
}
