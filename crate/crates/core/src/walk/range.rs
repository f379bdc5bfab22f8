use std::f64::consts::PI;

use super::line::{line_law, LineLaw};
use super::step::StepLawZ;
use crate::error::{check_cap, domain, Error, Result};
use crate::weight::{Weight, WeightMode};

pub const DEFAULT_RATIONAL_N_CAP: usize = 400;
pub const DEFAULT_FLOAT_N_CAP: usize = 5000;

/// Which algorithm filled a [`RangeTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeRoute {
    /// Forward dynamic program over `(lo, hi, pos)`; any nearest-neighbour step.
    Forward,
    /// Inclusion-exclusion over killed-walk kernels from the method of images.
    Images,
    /// Inclusion-exclusion over killed-walk kernels from the sine eigenbasis (floats).
    Spectral,
}

/// Options for [`range_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct RangeOptions {
    pub rational_cap: usize,
    pub float_cap: usize,
    /// Float mode only: intervals wider than the smallest `w` with
    /// `4 P[X_n ≥ ⌈(w+1)/2⌉] ≤ tail_tolerance` are dropped and their mass is
    /// added to the error bound.
    pub tail_tolerance: f64,
    /// Float mode only: hard upper bound on the stored interval width.
    pub width_cap: Option<usize>,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions {
            rational_cap: DEFAULT_RATIONAL_N_CAP,
            float_cap: DEFAULT_FLOAT_N_CAP,
            tail_tolerance: 1e-13,
            width_cap: None,
        }
    }
}

/// Joint law `q_n(lo, hi, pos)` of the running minimum, running maximum and
/// position of an `n`-step walk on `Z` started at 0.
///
/// Cells are stored densely per `(lo, hi)` pair with `hi - lo ≤ width`, each pair
/// owning `hi - lo + 1` consecutive position cells.
#[derive(Debug, Clone)]
pub struct RangeTable<W> {
    pub n: usize,
    /// Largest stored interval width `hi - lo`.
    pub width: usize,
    pub route: RangeRoute,
    /// Float mode: bound on the absolute mass error (truncation plus rounding).
    pub error_bound: f64,
    offsets: Vec<usize>,
    pub(crate) cells: Vec<W>,
}

const NONE: usize = usize::MAX;

impl<W: Weight> RangeTable<W> {
    fn zeroed(n: usize, width: usize, route: RangeRoute) -> Self {
        let side = n + 1;
        let mut offsets = vec![NONE; side * side];
        let mut total = 0usize;
        for neg_lo in 0..=n {
            for hi in 0..=n {
                if neg_lo + hi <= width {
                    offsets[neg_lo * side + hi] = total;
                    total += neg_lo + hi + 1;
                }
            }
        }
        RangeTable {
            n,
            width,
            route,
            error_bound: 0.0,
            offsets,
            cells: vec![W::zero(); total],
        }
    }

    /// Start index of the `(lo, hi)` block, if stored.
    #[inline]
    pub(crate) fn block(&self, lo: i64, hi: i64) -> Option<usize> {
        let n = self.n as i64;
        if lo > 0 || hi < 0 || lo < -n || hi > n {
            return None;
        }
        let off = self.offsets[(-lo) as usize * (self.n + 1) + hi as usize];
        (off != NONE).then_some(off)
    }

    #[inline]
    pub(crate) fn index(&self, lo: i64, hi: i64, pos: i64) -> Option<usize> {
        if pos < lo || pos > hi {
            return None;
        }
        self.block(lo, hi).map(|b| b + (pos - lo) as usize)
    }

    pub fn get(&self, lo: i64, hi: i64, pos: i64) -> W {
        match self.index(lo, hi, pos) {
            Some(i) => self.cells[i].clone(),
            None => W::zero(),
        }
    }

    /// Stored `(lo, hi)` pairs in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let n = self.n as i64;
        (0..=n).flat_map(move |neg_lo| {
            (0..=n)
                .filter(move |&hi| (neg_lo + hi) as usize <= self.width)
                .map(move |hi| (-neg_lo, hi))
        })
    }

    pub fn total(&self) -> W {
        let mut t = W::zero();
        for c in &self.cells {
            t.add_assign_ref(c);
        }
        t
    }

    /// Law of the position, `Σ_{lo,hi} q(lo, hi, ·)`; entries for `[-n, n]`.
    pub fn position_marginal(&self) -> Vec<W> {
        let n = self.n as i64;
        let mut out = vec![W::zero(); 2 * self.n + 1];
        for (lo, hi) in self.pairs() {
            let b = self.block(lo, hi).unwrap();
            for pos in lo..=hi {
                out[(pos + n) as usize].add_assign_ref(&self.cells[b + (pos - lo) as usize]);
            }
        }
        out
    }

    /// Law of the running maximum; entries for `[0, n]`.
    pub fn max_marginal(&self) -> Vec<W> {
        let mut out = vec![W::zero(); self.n + 1];
        for (lo, hi) in self.pairs() {
            let b = self.block(lo, hi).unwrap();
            for i in 0..=(hi - lo) as usize {
                out[hi as usize].add_assign_ref(&self.cells[b + i]);
            }
        }
        out
    }

    /// Law of the visited interval `[lo, hi]`, as `((lo, hi), mass)`.
    pub fn interval_marginal(&self) -> Vec<((i64, i64), W)> {
        self.pairs()
            .map(|(lo, hi)| {
                let b = self.block(lo, hi).unwrap();
                let mut t = W::zero();
                for c in &self.cells[b..=b + (hi - lo) as usize] {
                    t.add_assign_ref(c);
                }
                ((lo, hi), t)
            })
            .collect()
    }

    /// Fails when `tolerance` is tighter than the tracked error bound.
    pub fn check_tolerance(&self, tolerance: f64) -> Result<()> {
        if W::MODE == WeightMode::Float && tolerance < self.error_bound {
            Err(Error::Precision {
                tolerance,
                bound: self.error_bound,
            })
        } else {
            Ok(())
        }
    }
}

fn check_n<W: Weight>(n: usize, opts: &RangeOptions) -> Result<()> {
    let cap = match W::MODE {
        WeightMode::Rational => opts.rational_cap,
        WeightMode::Float => opts.float_cap,
    };
    check_cap("range table steps", n, cap)
}

/// Range table for `step` and `n` steps.
///
/// Symmetric steps use the killed-walk kernels: images in rational mode,
/// the sine eigenbasis in float mode. Other steps use the forward program.
pub fn range_table<W: Weight>(step: &StepLawZ, n: usize, opts: &RangeOptions) -> Result<RangeTable<W>> {
    check_n::<W>(n, opts)?;
    if !step.is_symmetric() {
        return Ok(range_table_forward(step, n));
    }
    match W::MODE {
        WeightMode::Rational => range_table_images(step, n),
        WeightMode::Float => {
            let t = range_table_spectral(step, n, opts)?;
            // Spectral tables are always f64; this branch only runs when W = f64.
            let t: Box<dyn std::any::Any> = Box::new(t);
            Ok(*t.downcast::<RangeTable<W>>().expect("float mode is f64"))
        }
    }
}

/// Forward dynamic program, one step at a time. Works for every nearest-neighbour
/// step law and is the reference the other routes are tested against.
pub fn range_table_forward<W: Weight>(step: &StepLawZ, n: usize) -> RangeTable<W> {
    let mut dp = RangeForward::new(step, n);
    for _ in 0..n {
        dp.step();
    }
    dp.into_table()
}

/// Incremental forward program: after `k` calls to [`RangeForward::step`] the
/// table holds `q_k` inside a layout sized for `n_max` steps.
pub struct RangeForward<W> {
    k: usize,
    probs: (W, W, W),
    cur: RangeTable<W>,
    next: RangeTable<W>,
}

impl<W: Weight> RangeForward<W> {
    pub fn new(step: &StepLawZ, n_max: usize) -> Self {
        let mut cur = RangeTable::zeroed(n_max, n_max, RangeRoute::Forward);
        let i = cur.index(0, 0, 0).unwrap();
        cur.cells[i] = W::one();
        let next = RangeTable::zeroed(n_max, n_max, RangeRoute::Forward);
        RangeForward {
            k: 0,
            probs: step.weights(),
            cur,
            next,
        }
    }

    pub fn steps(&self) -> usize {
        self.k
    }

    pub fn step(&mut self) {
        assert!(self.k < self.cur.n, "forward program is full");
        let (pm, pz, pp) = &self.probs;
        for c in self.next.cells.iter_mut() {
            *c = W::zero();
        }
        let k = self.k as i64;
        for neg_lo in 0..=k {
            for hi in 0..=(k - neg_lo) {
                let lo = -neg_lo;
                let b = self.cur.block(lo, hi).unwrap();
                for pos in lo..=hi {
                    let q = &self.cur.cells[b + (pos - lo) as usize];
                    if q.is_zero() {
                        continue;
                    }
                    let i = self.next.index(lo, hi, pos).unwrap();
                    self.next.cells[i].add_assign_ref(&q.mul_ref(pz));
                    let i = self.next.index(lo.min(pos - 1), hi, pos - 1).unwrap();
                    self.next.cells[i].add_assign_ref(&q.mul_ref(pm));
                    let i = self.next.index(lo, hi.max(pos + 1), pos + 1).unwrap();
                    self.next.cells[i].add_assign_ref(&q.mul_ref(pp));
                }
            }
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        self.k += 1;
    }

    pub fn table(&self) -> &RangeTable<W> {
        &self.cur
    }

    /// The table for exactly `k` steps in its own compact layout.
    pub fn snapshot(&self) -> RangeTable<W> {
        let k = self.k;
        let mut t = RangeTable::zeroed(k, k, RangeRoute::Forward);
        for (lo, hi) in t.pairs().collect::<Vec<_>>() {
            let src = self.cur.block(lo, hi).unwrap();
            let dst = t.block(lo, hi).unwrap();
            let len = (hi - lo + 1) as usize;
            t.cells[dst..dst + len].clone_from_slice(&self.cur.cells[src..src + len]);
        }
        t
    }

    pub fn into_table(self) -> RangeTable<W> {
        if self.k == self.cur.n {
            self.cur
        } else {
            self.snapshot()
        }
    }
}

/// Fills the table from killed-walk kernels: `K(lo, hi, a)` is the probability of
/// staying inside `[lo, hi]` for `n` steps and ending at `a`, and
/// `q = K(lo,hi) − K(lo+1,hi) − K(lo,hi−1) + K(lo+1,hi−1)`.
fn fill_from_kernels<W: Weight>(
    table: &mut RangeTable<W>,
    mut kernel_block: impl FnMut(i64, i64, &mut Vec<W>),
) -> f64 {
    let n = table.n as i64;
    let width = table.width as i64;
    // kernels[w % 3] holds all blocks of width w, indexed by -lo.
    let mut kernels: [Vec<Vec<W>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut clamped = 0.0f64;
    let mut buf = Vec::new();
    for w in 0..=width {
        let mut row = Vec::with_capacity(w as usize + 1);
        for neg_lo in 0..=w {
            let (lo, hi) = (-neg_lo, w - neg_lo);
            if lo < -n || hi > n {
                row.push(Vec::new());
                continue;
            }
            kernel_block(lo, hi, &mut buf);
            row.push(buf.clone());
        }
        kernels[(w % 3) as usize] = row;
        let k_of = |kernels: &[Vec<Vec<W>>; 3], lo: i64, hi: i64, a: i64| -> W {
            // zero unless the interval contains 0 and a
            if lo > 0 || hi < 0 || a < lo || a > hi {
                return W::zero();
            }
            let ww = hi - lo;
            let blk = &kernels[(ww % 3) as usize][(-lo) as usize];
            if blk.is_empty() {
                W::zero()
            } else {
                blk[(a - lo) as usize].clone()
            }
        };
        for neg_lo in 0..=w {
            let (lo, hi) = (-neg_lo, w - neg_lo);
            let Some(b) = table.block(lo, hi) else { continue };
            for a in lo..=hi {
                let mut q = k_of(&kernels, lo, hi, a) - k_of(&kernels, lo + 1, hi, a) - k_of(&kernels, lo, hi - 1, a)
                    + k_of(&kernels, lo + 1, hi - 1, a);
                if q < W::zero() {
                    clamped += q.to_f64().abs();
                    q = W::zero();
                }
                table.cells[b + (a - lo) as usize] = q;
            }
        }
    }
    clamped
}

/// Method of images: with absorbing sites `lo − 1` and `hi + 1` and `D = hi − lo + 2`,
/// `K(0 → a) = Σ_k p(a + 2kD) − p(2(hi+1) − a + 2kD)` where `p` is the free `n`-step law.
pub fn range_table_images<W: Weight>(step: &StepLawZ, n: usize) -> Result<RangeTable<W>> {
    if !step.is_symmetric() {
        return Err(domain("the image construction needs a symmetric step"));
    }
    let law: LineLaw<W> = line_law(step, n);
    let ni = n as i64;
    let mut table = RangeTable::zeroed(n, n, RangeRoute::Images);
    fill_from_kernels(&mut table, |lo, hi, out| {
        let d = hi - lo + 2;
        let b = hi + 1;
        out.clear();
        for a in lo..=hi {
            let mut k = W::zero();
            let period = 2 * d;
            // all j with |a + j·period| ≤ n
            let j0 = (-ni - a).div_euclid(period) - 1;
            let j1 = (ni - a).div_euclid(period) + 1;
            for j in j0..=j1 {
                k.add_assign_ref(&law.get(a + j * period));
            }
            let r = 2 * b - a;
            let j0 = (-ni - r).div_euclid(period) - 1;
            let j1 = (ni - r).div_euclid(period) + 1;
            for j in j0..=j1 {
                k = k - law.get(r + j * period);
            }
            out.push(k);
        }
    });
    Ok(table)
}

/// Smallest width `w ≤ n` with `4 P[X_n ≥ ⌈(w+1)/2⌉] ≤ tol`, and that bound.
///
/// `hi − lo > w` forces `Max_n` or `−Min_n` to reach `⌈(w+1)/2⌉`, and each of
/// those events has probability at most `2 P[X_n ≥ ·]` by reflection.
pub fn truncation_width(step: &StepLawZ, n: usize, tol: f64) -> (usize, f64) {
    let law: LineLaw<f64> = line_law(step, n);
    let mut tails = vec![0.0; n + 2];
    for x in (0..=n).rev() {
        tails[x] = tails[x + 1] + law.get(x as i64);
    }
    for w in 0..n {
        let m = (w + 2) / 2;
        let bound = 4.0 * tails[m.min(n + 1)];
        if bound <= tol {
            return (w, bound);
        }
    }
    (n, 0.0)
}

/// Sine-eigenbasis kernels: with `D = hi − lo + 2`, `s = 1 − lo`, `e = a − lo + 1`,
/// `K = (2/D) Σ_k sin(πks/D) sin(πke/D) λ_k^n`, `λ_k = p_0 + 2p cos(πk/D)`.
///
/// Terms with `|λ_k|^n < 1e-22 λ_1^n` are dropped. Unlike the image sum this
/// stays accurate in relative terms for narrow intervals, where the killed
/// probability is tiny.
pub fn range_table_spectral(step: &StepLawZ, n: usize, opts: &RangeOptions) -> Result<RangeTable<f64>> {
    if !step.is_symmetric() {
        return Err(domain("the spectral construction needs a symmetric step"));
    }
    check_cap("range table steps", n, opts.float_cap)?;
    let (p, p0, _) = step.weights::<f64>();
    let (mut width, tail) = truncation_width(step, n, opts.tail_tolerance);
    let mut error = tail;
    if let Some(cap) = opts.width_cap {
        if cap < width {
            width = cap;
            // Everything wider than the cap is dropped.
            error = 4.0 * {
                let law: LineLaw<f64> = line_law(step, n);
                law.upper_tail(((cap + 2) / 2) as i64)
            };
        }
    }
    let nf = n as f64;
    let mut table = RangeTable::zeroed(n, width, RangeRoute::Spectral);
    let mut cached_d = -1i64;
    let mut sines: Vec<f64> = Vec::new();
    let mut powers: Vec<f64> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let clamped = fill_from_kernels(&mut table, |lo, hi, out| {
        let d = hi - lo + 2;
        if d != cached_d {
            cached_d = d;
            active.clear();
            powers.clear();
            let lam1 = p0 + 2.0 * p * (PI / d as f64).cos();
            let ln1 = lam1.abs().ln() * nf;
            for k in 1..d {
                let lam = p0 + 2.0 * p * (PI * k as f64 / d as f64).cos();
                let lnk = lam.abs().ln() * nf;
                if n == 0 || lnk - ln1 >= -50.66 {
                    active.push(k as usize);
                    let mag = if n == 0 { 1.0 } else { lnk.exp() };
                    let sign = if lam < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                    powers.push(sign * mag * 2.0 / d as f64);
                }
            }
            let du = d as usize;
            sines.clear();
            sines.resize(active.len() * (du + 1), 0.0);
            for (i, &k) in active.iter().enumerate() {
                for j in 0..=du {
                    sines[i * (du + 1) + j] = (PI * (k * j) as f64 / d as f64).sin();
                }
            }
        }
        let du = d as usize;
        let s = (1 - lo) as usize;
        out.clear();
        for a in lo..=hi {
            let e = (a - lo + 1) as usize;
            let mut k = 0.0;
            for (i, pw) in powers.iter().enumerate() {
                let row = i * (du + 1);
                k += sines[row + s] * sines[row + e] * pw;
            }
            out.push(k);
        }
    });
    let pairs = table.pairs().count() as f64;
    table.error_bound = error + clamped + pairs * 1e-15;
    Ok(table)
}
