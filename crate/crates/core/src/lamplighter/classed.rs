use std::sync::Arc;

use crate::error::{domain, Result};
use crate::group::{interval_i, FiniteGroup, GroupDescriptor, GroupElement, IntervalZ};
use crate::walk::{range_table, RangeOptions, RangeTable, StepLawZ};
use crate::weight::{Weight, WeightMode};

/// Exact `n`-step law of the switch-walk-switch walk on `Z ≀ F`, stored by class.
///
/// The probability of `z = (a, f)` depends only on `a` and the hull
/// `J = [L, R]` of `{0, a} ∪ supp f`:
///
/// `μ^{*n}(z) = Σ_{lo ≤ L, hi ≥ R} q_n(lo, hi, a) |F|^{-(hi - lo + 1)}`.
///
/// Cells hold the scaled weight `W̃(a, L, R) = μ^{*n}(z) · |F|^{R - L + 1}`, which
/// stays in `[0, 1]` and never underflows.
#[derive(Debug, Clone)]
pub struct ClassedDistribution<W> {
    pub n: usize,
    pub desc: GroupDescriptor,
    lamp: Arc<FiniteGroup>,
    table: RangeTable<W>,
}

/// Number of lamp configurations `f` whose support has hull exactly `I`.
pub fn class_cardinality<W: Weight>(lamp_order: usize, interval: IntervalZ) -> W {
    let c = lamp_order as i64;
    match interval.bounds() {
        None => W::one(),
        Some((u, v)) if u == v => W::from_ratio(c - 1, 1),
        Some((u, v)) => W::from_ratio((c - 1) * (c - 1), 1).mul_ref(&W::powi(c, v - u - 1)),
    }
}

/// Lower bound on the word length of elements with base point `a` and hull `[l, r]`
/// in the class where the lamp-defined endpoints carry a lamp; attained.
pub fn minimal_length(a: i64, l: i64, r: i64) -> u64 {
    let e = (l < a.min(0)) as i64 + (r > a.max(0)) as i64;
    (e + 2 * (r - l) - a.abs()) as u64
}

impl<W: Weight> ClassedDistribution<W> {
    /// Consumes a range table and replaces each cell `q(L, R, a)` by the scaled
    /// weight, via the suffix recursion
    /// `W̃(L,R) = q(L,R) + (W̃(L−1,R) + W̃(L,R+1))/c − W̃(L−1,R+1)/c²`.
    pub fn from_range_table(mut table: RangeTable<W>, lamp: Arc<FiniteGroup>) -> Self {
        let n = table.n as i64;
        let c = lamp.order() as i64;
        let inv_c = W::from_ratio(1, c);
        let inv_c2 = W::from_ratio(1, c * c);
        let width = table.width as i64;
        for a in -n..=n {
            let l_top = a.min(0);
            let r_bot = a.max(0);
            for l in -n..=l_top {
                for r in (r_bot..=n.min(l + width)).rev() {
                    let i = table.index(l, r, a).unwrap();
                    let mut s = table.cells[i].clone();
                    if let Some(j) = table.index(l - 1, r, a) {
                        s.add_assign_ref(&table.cells[j].mul_ref(&inv_c));
                    }
                    if let Some(j) = table.index(l, r + 1, a) {
                        s.add_assign_ref(&table.cells[j].mul_ref(&inv_c));
                    }
                    if let Some(j) = table.index(l - 1, r + 1, a) {
                        s = s - table.cells[j].mul_ref(&inv_c2);
                    }
                    table.cells[i] = s;
                }
            }
        }
        let desc = GroupDescriptor::Wreath {
            base_dim: 1,
            lamp: Box::new(GroupDescriptor::Finite(lamp.clone())),
        };
        ClassedDistribution {
            n: table.n,
            desc,
            lamp,
            table,
        }
    }

    pub fn lamp_order(&self) -> usize {
        self.lamp.order()
    }

    pub fn lamp_group(&self) -> &FiniteGroup {
        &self.lamp
    }

    /// Widest stored hull `R − L`; wider classes are treated as zero.
    pub fn width(&self) -> usize {
        self.table.width
    }

    /// Float mode: bound on the absolute mass error inherited from the range table.
    pub fn error_bound(&self) -> f64 {
        self.table.error_bound
    }

    pub fn check_tolerance(&self, tol: f64) -> Result<()> {
        self.table.check_tolerance(tol)
    }

    /// `W̃(a, L, R)`; zero outside the stored range.
    #[inline]
    pub fn scaled_weight(&self, a: i64, l: i64, r: i64) -> W {
        if l > a.min(0) || r < a.max(0) {
            return W::zero();
        }
        self.table.get(l, r, a)
    }

    #[inline]
    pub(crate) fn scaled_weight_ref(&self, a: i64, l: i64, r: i64) -> Option<&W> {
        if l > a.min(0) || r < a.max(0) {
            return None;
        }
        self.table.index(l, r, a).map(|i| &self.table.cells[i])
    }

    /// Per-configuration weight of the class with base point `a` and lamp hull `interval`.
    pub fn class_weight(&self, a: i64, interval: IntervalZ) -> W {
        if self.n == 0 {
            // nothing has been switched yet
            return if a == 0 && interval.is_empty() { W::one() } else { W::zero() };
        }
        let j = interval.hull_point(0).hull_point(a);
        let (l, r) = j.bounds().unwrap();
        self.scaled_weight(a, l, r).mul_ref(&W::powi(self.lamp_order() as i64, -(r - l + 1)))
    }

    fn split(&self, z: &GroupElement) -> Result<(i64, IntervalZ)> {
        self.desc.check(z)?;
        let w = z.as_wreath().unwrap();
        Ok((w.base[0], interval_i(z)?))
    }

    /// `μ^{*n}(z)`.
    pub fn point_probability(&self, z: &GroupElement) -> Result<W> {
        let (a, i) = self.split(z)?;
        Ok(self.class_weight(a, i))
    }

    /// `ln μ^{*n}(z)`, finite even where `μ^{*n}(z)` underflows a float.
    pub fn ln_point_probability(&self, z: &GroupElement) -> Result<f64> {
        let (a, i) = self.split(z)?;
        if self.n == 0 {
            return Ok(self.class_weight(a, i).ln());
        }
        let (l, r) = i.hull_point(0).hull_point(a).bounds().unwrap();
        Ok(self.scaled_weight(a, l, r).ln() - (r - l + 1) as f64 * (self.lamp_order() as f64).ln())
    }

    /// Mass of all elements with base point `a` and hull exactly `[l, r]`:
    /// `((c−1)/c)^e W̃` with `e` the number of lamp-defined endpoints.
    pub fn hull_class_mass(&self, a: i64, l: i64, r: i64) -> W {
        let c = self.lamp_order() as i64;
        let e = (l < a.min(0)) as u32 + (r > a.max(0)) as u32;
        let mut m = self.scaled_weight(a, l, r);
        let f = W::from_ratio(c - 1, c);
        for _ in 0..e {
            m = m.mul_ref(&f);
        }
        m
    }

    /// All stored hull classes `(a, L, R)` in a fixed order.
    pub fn hull_classes(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.table
            .pairs()
            .flat_map(|(l, r)| (l..=r).map(move |a| (a, l, r)))
    }

    /// `Σ` of hull class masses.
    pub fn total_mass(&self) -> W {
        let mut t = W::zero();
        for (a, l, r) in self.hull_classes() {
            t.add_assign_ref(&self.hull_class_mass(a, l, r));
        }
        t
    }

    /// `Σ_{(a, I)} w(a, I) · #configs(I)` over lamp-hull classes; an independent
    /// route to the total mass.
    pub fn total_mass_by_lamp_classes(&self) -> W {
        let n = self.n as i64;
        let c = self.lamp_order();
        let mut t = W::zero();
        for a in -n..=n {
            t.add_assign_ref(&self.class_weight(a, IntervalZ::Empty));
            for u in -n..=n {
                for v in u..=n {
                    let i = IntervalZ::new(u, v);
                    let (l, r) = i.hull_point(0).hull_point(a).bounds().unwrap();
                    if (r - l) as usize > self.width() {
                        continue;
                    }
                    let w = self.class_weight(a, i);
                    if !w.is_zero() {
                        t.add_assign_ref(&w.mul_ref(&class_cardinality(c, i)));
                    }
                }
            }
        }
        t
    }

    /// Shannon entropy (natural log).
    pub fn entropy(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let ln_c = (self.lamp_order() as f64).ln();
        let mut h = 0.0;
        for (a, l, r) in self.hull_classes() {
            let m = self.hull_class_mass(a, l, r);
            if m.is_zero() {
                continue;
            }
            let ln_w = self.scaled_weight(a, l, r).ln() - (r - l + 1) as f64 * ln_c;
            h -= m.to_f64() * ln_w;
        }
        h
    }
}

/// Exact law for the lamp group `lamp`, step law `step` and `n` steps.
pub fn exact_distribution<W: Weight>(
    lamp: &GroupDescriptor,
    step: &StepLawZ,
    n: usize,
    opts: &RangeOptions,
) -> Result<ClassedDistribution<W>> {
    let lamp = match lamp {
        GroupDescriptor::Finite(g) => g.clone(),
        _ => return Err(domain("the lamplighter formula needs a finite lamp group")),
    };
    let table = range_table::<W>(step, n, opts)?;
    Ok(ClassedDistribution::from_range_table(table, lamp))
}

/// `H(μ^{*n})` for `n = 0..=n_max` on `Z ≀ Z/q`, from one incremental range program.
pub fn entropy_curve(lamp_order: usize, step: &StepLawZ, n_max: usize) -> Vec<f64> {
    let lamp = Arc::new(FiniteGroup::cyclic(lamp_order));
    let mut dp = crate::walk::RangeForward::<f64>::new(step, n_max);
    let mut out = vec![0.0];
    for _ in 0..n_max {
        dp.step();
        out.push(ClassedDistribution::from_range_table(dp.snapshot(), lamp.clone()).entropy());
    }
    out
}

pub(crate) fn is_float<W: Weight>() -> bool {
    W::MODE == WeightMode::Float
}
