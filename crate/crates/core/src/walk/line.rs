use super::step::StepLawZ;
use crate::error::{domain, Result};
use crate::weight::Weight;

/// Law of `X_n` for the walk on `Z` started at 0; entries for `x ∈ [-n, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineLaw<W> {
    pub n: usize,
    p: Vec<W>,
}

impl<W: Weight> LineLaw<W> {
    pub fn get(&self, x: i64) -> W {
        let n = self.n as i64;
        if x < -n || x > n {
            W::zero()
        } else {
            self.p[(x + n) as usize].clone()
        }
    }

    pub fn values(&self) -> &[W] {
        &self.p
    }

    /// `P[X_n ≥ x]`.
    pub fn upper_tail(&self, x: i64) -> W {
        let n = self.n as i64;
        let mut t = W::zero();
        for y in x.max(-n)..=n {
            t.add_assign_ref(&self.p[(y + n) as usize]);
        }
        t
    }
}

/// `n`-step law on `Z` by forward recursion.
pub fn line_law<W: Weight>(step: &StepLawZ, n: usize) -> LineLaw<W> {
    let (pm, pz, pp) = step.weights::<W>();
    let mut p = vec![W::zero(); 2 * n + 1];
    p[n] = W::one();
    let mut next = p.clone();
    for k in 0..n {
        // support after k steps is [n-k, n+k]
        let (lo, hi) = (n - k, n + k);
        for v in next[lo - 1..=hi + 1].iter_mut() {
            *v = W::zero();
        }
        for i in lo..=hi {
            let q = &p[i];
            if q.is_zero() {
                continue;
            }
            next[i - 1].add_assign_ref(&q.mul_ref(&pm));
            next[i].add_assign_ref(&q.mul_ref(&pz));
            next[i + 1].add_assign_ref(&q.mul_ref(&pp));
        }
        std::mem::swap(&mut p, &mut next);
    }
    LineLaw { n, p }
}

/// Law of the walk on `{0, 1, 2, ...}` reflected at zero: a step from 0 towards
/// −1 is replaced by a hold. Entries for `x ∈ [0, n]`.
pub fn reflected_line_law<W: Weight>(step: &StepLawZ, n: usize) -> Vec<W> {
    let (pm, pz, pp) = step.weights::<W>();
    let mut p = vec![W::zero(); n + 2];
    p[0] = W::one();
    for k in 0..n {
        let mut next = vec![W::zero(); n + 2];
        for x in 0..=k {
            let q = &p[x];
            if q.is_zero() {
                continue;
            }
            let down = if x == 0 { 0 } else { x - 1 };
            next[down].add_assign_ref(&q.mul_ref(&pm));
            next[x].add_assign_ref(&q.mul_ref(&pz));
            next[x + 1].add_assign_ref(&q.mul_ref(&pp));
        }
        p = next;
    }
    p.truncate(n + 1);
    p
}

/// Law of `Max_n = max_{k ≤ n} X_k`, entries `m ∈ [0, n]`.
///
/// Uses the reflection identity `P[Max_n ≥ m] = P[X_n ≥ m] + P[X_n > m]` for
/// `m ≥ 1`, valid for symmetric nearest-neighbour steps. The range table gives
/// the same law as a marginal; see [`super::RangeTable::max_marginal`].
pub fn max_law<W: Weight>(step: &StepLawZ, n: usize) -> Result<Vec<W>> {
    if !step.is_symmetric() {
        return Err(domain("max_law needs a symmetric step"));
    }
    let law = line_law::<W>(step, n);
    // tail[m] = P[Max_n ≥ m]
    let mut tail = Vec::with_capacity(n + 2);
    tail.push(W::one());
    for m in 1..=n as i64 + 1 {
        tail.push(law.upper_tail(m) + law.upper_tail(m + 1));
    }
    Ok((0..=n).map(|m| tail[m].clone() - tail[m + 1].clone()).collect())
}
