use super::classed::ClassedDistribution;
use crate::error::{domain, Result};
use crate::group::GroupElement;
use crate::weight::Weight;

/// Largest lamp support of an increment accepted by [`exact_tv_shift`].
pub const MAX_INCREMENT_SITES: usize = 4;

/// `Σ_h |μ^{*n}(h) − μ^{*n}(hg)|` for `g = (i, f')` with at most four lamp sites.
///
/// For each base point `a` the lamp configuration `f` is split into its values on
/// `D = a + supp f'` (enumerated) and the rest, which is grouped by its hull
/// `[u, v]` (`u, v ∉ D`). The number of outside configurations with hull `[u, v]`
/// is `(c−1)² c^{v−u−1−|D ∩ (u,v)|}`, `c − 1` when `u = v`, and 1 when empty.
pub fn exact_tv_shift<W: Weight>(cd: &ClassedDistribution<W>, g: &GroupElement) -> Result<W> {
    cd.desc.check(g)?;
    let gw = g.as_wreath().unwrap();
    if gw.support_len() > MAX_INCREMENT_SITES {
        return Err(domain(format!(
            "exact_tv_shift supports translations and increments with at most {MAX_INCREMENT_SITES} lamp sites"
        )));
    }
    if cd.n == 0 {
        return Ok(if gw.base[0] == 0 && gw.support_len() == 0 { W::zero() } else { W::from_ratio(2, 1) });
    }
    let i = gw.base[0];
    let lamp = cd.lamp_group();
    let c = lamp.order();
    let ci = c as i64;
    let d_rel: Vec<i64> = gw.lamps().keys().map(|k| k[0]).collect();
    let d_val: Vec<usize> = gw
        .lamps()
        .values()
        .map(|v| match v {
            GroupElement::Finite(k) => *k,
            _ => unreachable!("checked by the descriptor"),
        })
        .collect();
    let k = d_rel.len();
    let n = cd.n as i64;
    let width = cd.width() as i64;
    // assignments of lamp values on D, as (P1 sites on, P2 sites on) masks
    let mut masks: Vec<(u32, u32)> = Vec::with_capacity(c.pow(k as u32));
    for code in 0..c.pow(k as u32) {
        let (mut m1, mut m2, mut rest) = (0u32, 0u32, code);
        for (j, &dv) in d_val.iter().enumerate() {
            let phi = rest % c;
            rest /= c;
            if phi != 0 {
                m1 |= 1 << j;
            }
            if lamp.mul(phi, dv) != 0 {
                m2 |= 1 << j;
            }
        }
        masks.push((m1, m2));
    }
    let c_minus = W::from_ratio(ci - 1, 1);
    let pow_cache: Vec<W> = (0..=(4 * n + 8)).map(|e| W::powi(ci, -e)).collect();
    let c_pow = |e: i64| -> W {
        if e >= 0 {
            W::powi(ci, e)
        } else {
            pow_cache[(-e) as usize].clone()
        }
    };
    let hull_of = |mask: u32, sites: &[i64], base: (i64, i64)| -> (i64, i64) {
        let (mut lo, mut hi) = base;
        for (j, &y) in sites.iter().enumerate() {
            if mask & (1 << j) != 0 {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (lo, hi)
    };
    let mut total = W::zero();
    let mut d_abs = vec![0i64; k];
    for a in (-n - i.abs())..=(n + i.abs()) {
        let b = a + i;
        if a.abs() > n && b.abs() > n {
            continue;
        }
        for j in 0..k {
            d_abs[j] = a + d_rel[j];
        }
        // outside hull: None (empty) or Some((u, v))
        let mut outs: Vec<Option<(i64, i64)>> = vec![None];
        for u in -n..=n {
            if d_abs.contains(&u) {
                continue;
            }
            for v in u..=(u + width).min(n) {
                if !d_abs.contains(&v) {
                    outs.push(Some((u, v)));
                }
            }
        }
        for out in outs {
            let (count, free_exp, base1, base2) = match out {
                None => (W::one(), 0i64, (a.min(0), a.max(0)), (b.min(0), b.max(0))),
                Some((u, v)) if u == v => (
                    c_minus.clone(),
                    0,
                    (a.min(0).min(u), a.max(0).max(u)),
                    (b.min(0).min(u), b.max(0).max(u)),
                ),
                Some((u, v)) => {
                    let inside = d_abs.iter().filter(|&&y| y > u && y < v).count() as i64;
                    (
                        c_minus.mul_ref(&c_minus),
                        v - u - 1 - inside,
                        (a.min(0).min(u), a.max(0).max(v)),
                        (b.min(0).min(u), b.max(0).max(v)),
                    )
                }
            };
            if base1.1 - base1.0 > width && base2.1 - base2.0 > width {
                continue;
            }
            for &(m1, m2) in &masks {
                let (l1, r1) = hull_of(m1, &d_abs, base1);
                let (l2, r2) = hull_of(m2, &d_abs, base2);
                let w1 = cd.scaled_weight_ref(a, l1, r1);
                let w2 = cd.scaled_weight_ref(b, l2, r2);
                let t1 = w1.map(|w| w.mul_ref(&c_pow(free_exp - (r1 - l1 + 1))));
                let t2 = w2.map(|w| w.mul_ref(&c_pow(free_exp - (r2 - l2 + 1))));
                let diff = match (t1, t2) {
                    (None, None) => continue,
                    (Some(x), None) => x,
                    (None, Some(y)) => y,
                    (Some(x), Some(y)) => (x - y).abs(),
                };
                if !diff.is_zero() {
                    total.add_assign_ref(&diff.mul_ref(&count));
                }
            }
        }
    }
    Ok(total)
}
