use serde::{Deserialize, Serialize};

use super::classed::ClassedDistribution;
use crate::error::{domain, Result};
use crate::group::{interval_j, lamplighter_element, GroupElement, IntervalZ};
use crate::weight::Weight;

/// Which classes count as satisfying the hypothesis of the invariance claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvarianceGate {
    /// `a + J(g) ⊆ J(class)`.
    Literal,
    /// `a + J(g) ⊆ J(class)` and `a + supp g` avoids every endpoint of `J(class)`
    /// that is defined by a lamp rather than by `0` or `a`.
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub base: i64,
    pub interval: IntervalZ,
    pub h: String,
    pub p_h: f64,
    pub p_hg: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub increment: String,
    /// Classes where the hypothesis held and equality was checked.
    pub checked: usize,
    /// Classes where the hypothesis failed.
    pub skipped: usize,
    pub representatives: usize,
    pub violations: Vec<Violation>,
}

/// Class representatives: lamps on the two endpoints and, for wider hulls, an
/// empty and a full interior.
fn representatives(a: i64, interval: IntervalZ, s: usize) -> Vec<GroupElement> {
    match interval.bounds() {
        None => vec![lamplighter_element(a, &[])],
        Some((u, v)) if u == v => vec![lamplighter_element(a, &[(u, s)])],
        Some((u, v)) => {
            let sparse = lamplighter_element(a, &[(u, s), (v, s)]);
            if v - u == 1 {
                return vec![sparse];
            }
            let full: Vec<(i64, usize)> = (u..=v).map(|y| (y, s)).collect();
            vec![sparse, lamplighter_element(a, &full)]
        }
    }
}

/// Checks `μ^{*n}(hg) = μ^{*n}(h)` over every class `(a, I)` for a lamp-only `g`,
/// using representatives `h` of each class and real group multiplication.
///
/// Rational mode requires exact equality; float mode allows the tracked error bound.
pub fn check_exact_invariance<W: Weight>(
    cd: &ClassedDistribution<W>,
    g: &GroupElement,
    gate: InvarianceGate,
) -> Result<InvarianceReport> {
    cd.desc.check(g)?;
    let gw = g.as_wreath().unwrap();
    if gw.base[0] != 0 {
        return Err(domain("the invariance check needs a lamp-only increment"));
    }
    let jg = interval_j(g)?;
    let sites: Vec<i64> = gw.lamps().keys().map(|k| k[0]).collect();
    let n = cd.n as i64;
    let s = cd.lamp_group().generators()[0];
    let tol = if super::classed::is_float::<W>() { cd.error_bound() } else { 0.0 };
    let mut report = InvarianceReport {
        increment: g.to_string(),
        ..Default::default()
    };
    let mut classes = Vec::new();
    for a in -n..=n {
        classes.push((a, IntervalZ::Empty));
        for u in -n..=n {
            for v in u..=n {
                classes.push((a, IntervalZ::new(u, v)));
            }
        }
    }
    for (a, interval) in classes {
        let j = interval.hull_point(0).hull_point(a);
        let (l, r) = j.bounds().unwrap();
        if (r - l) as usize > cd.width() {
            continue;
        }
        let mut ok = j.contains_interval(&jg.shift(a));
        if ok && gate == InvarianceGate::Interior {
            let lamp_left = l < a.min(0);
            let lamp_right = r > a.max(0);
            ok = sites
                .iter()
                .all(|&x| !(lamp_left && a + x == l) && !(lamp_right && a + x == r));
        }
        if !ok {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        for h in representatives(a, interval, s) {
            report.representatives += 1;
            let hg = cd.desc.multiply(&h, g)?;
            let p_h = cd.point_probability(&h)?;
            let p_hg = cd.point_probability(&hg)?;
            let equal = if tol == 0.0 {
                p_h == p_hg
            } else {
                (p_h.to_f64() - p_hg.to_f64()).abs() <= tol
            };
            if !equal {
                report.violations.push(Violation {
                    base: a,
                    interval,
                    h: h.to_string(),
                    p_h: p_h.to_f64(),
                    p_hg: p_hg.to_f64(),
                });
            }
        }
    }
    Ok(report)
}
