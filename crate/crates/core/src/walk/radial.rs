use crate::error::{domain, Result};
use crate::weight::Weight;

/// Law of the word length of the simple walk on the free group of rank `m`:
/// from 0 the walk moves to 1; from `l > 0` it moves to `l − 1` with probability
/// `1/(2m)` and to `l + 1` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable<W> {
    pub m: usize,
    pub n: usize,
    p: Vec<W>,
}

impl<W: Weight> RadialTable<W> {
    /// `P[X_n = l]`; zero outside `[0, n]`.
    pub fn get(&self, l: usize) -> W {
        self.p.get(l).cloned().unwrap_or_else(W::zero)
    }

    pub fn values(&self) -> &[W] {
        &self.p
    }

    /// `P[X_n ≥ l]`.
    pub fn tail(&self, l: usize) -> W {
        let mut t = W::zero();
        for v in self.p.iter().skip(l) {
            t.add_assign_ref(v);
        }
        t
    }
}

pub fn reflected_radial_table<W: Weight>(m: usize, n: usize) -> Result<RadialTable<W>> {
    if m < 2 {
        return Err(domain("free rank must be at least 2"));
    }
    let two_m = 2 * m as i64;
    let down = W::from_ratio(1, two_m);
    let up = W::from_ratio(two_m - 1, two_m);
    let mut p = vec![W::zero(); n + 2];
    p[0] = W::one();
    let mut next = p.clone();
    for k in 0..n {
        for v in next.iter_mut().take(k + 2) {
            *v = W::zero();
        }
        // only lengths of the parity of k are occupied
        let mut l = k % 2;
        while l <= k {
            let q = &p[l];
            if !q.is_zero() {
                if l == 0 {
                    next[1].add_assign_ref(q);
                } else {
                    next[l - 1].add_assign_ref(&q.mul_ref(&down));
                    next[l + 1].add_assign_ref(&q.mul_ref(&up));
                }
            }
            l += 2;
        }
        std::mem::swap(&mut p, &mut next);
    }
    p.truncate(n + 1);
    Ok(RadialTable { m, n, p })
}
