//! Fast single-trajectory simulators for the standard walks.
//!
//! All base steps are lazy: `(1/4, 1/2, 1/4)` on `Z`, hold `1/2` and `1/8` per
//! neighbour on `Z²`. Lamp switches are uniform on a finite lamp group and the
//! lazy step on a `Z` lamp group, matching [`crate::walk::sws_measure`].

use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::group::FiniteGroup;
#[cfg(test)]
use crate::group::{GroupElement, WreathElement};

/// Random bits drawn 64 at a time.
pub(crate) struct Bits<R> {
    rng: R,
    buf: u64,
    left: u32,
}

impl<R: RngCore> Bits<R> {
    pub fn new(rng: R) -> Self {
        Bits { rng, buf: 0, left: 0 }
    }

    #[inline]
    pub fn take(&mut self, k: u32) -> u64 {
        if self.left < k {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let v = self.buf & ((1u64 << k) - 1);
        self.buf >>= k;
        self.left -= k;
        v
    }

    /// `−1, 0, 0, +1` with equal probability.
    #[inline]
    pub fn lazy(&mut self) -> i64 {
        match self.take(2) {
            0 => -1,
            3 => 1,
            _ => 0,
        }
    }

    /// Lazy planar step as `(dx, dy)`.
    #[inline]
    pub fn lazy_plane(&mut self) -> (i64, i64) {
        match self.take(3) {
            4 => (1, 0),
            5 => (-1, 0),
            6 => (0, 1),
            7 => (0, -1),
            _ => (0, 0),
        }
    }

    pub fn uniform(&mut self, q: usize) -> usize {
        if q.is_power_of_two() {
            self.take(q.trailing_zeros()) as usize
        } else {
            self.rng.gen_range(0..q)
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum LampKind {
    Finite(Arc<FiniteGroup>),
    Integer,
}

/// Switch-walk-switch walk on `Z ≀ F` or `Z ≀ Z` over a window `[−n, n]`.
pub(crate) struct LineWreathWalk {
    pub kind: LampKind,
    pub pos: i64,
    offset: i64,
    pub lamps: Vec<i64>,
    /// Number of switches applied at each site.
    pub switches: Vec<u32>,
    pub lo: i64,
    pub hi: i64,
}

impl LineWreathWalk {
    pub fn new(kind: LampKind, n_max: usize) -> Self {
        let size = 2 * n_max + 3;
        LineWreathWalk {
            kind,
            pos: 0,
            offset: n_max as i64 + 1,
            lamps: vec![0; size],
            switches: vec![0; size],
            lo: 0,
            hi: 0,
        }
    }

    #[inline]
    fn switch<R: RngCore>(&mut self, bits: &mut Bits<R>) {
        let i = (self.pos + self.offset) as usize;
        self.switches[i] += 1;
        match &self.kind {
            LampKind::Integer => self.lamps[i] += bits.lazy(),
            LampKind::Finite(g) => {
                let u = bits.uniform(g.order());
                self.lamps[i] = g.mul(self.lamps[i] as usize, u) as i64;
            }
        }
    }

    #[inline]
    pub fn step<R: RngCore>(&mut self, bits: &mut Bits<R>) {
        self.switch(bits);
        self.pos += bits.lazy();
        self.lo = self.lo.min(self.pos);
        self.hi = self.hi.max(self.pos);
        self.switch(bits);
    }

    pub fn lamp(&self, y: i64) -> i64 {
        self.lamps.get((y + self.offset) as usize).copied().unwrap_or(0)
    }

    pub fn switch_count(&self, y: i64) -> u32 {
        self.switches.get((y + self.offset) as usize).copied().unwrap_or(0)
    }

    fn lamp_length(&self, v: i64) -> u64 {
        match &self.kind {
            LampKind::Integer => v.unsigned_abs(),
            LampKind::Finite(g) => g.length(v as usize),
        }
    }

    /// Word length of the current element.
    pub fn length(&self) -> u64 {
        let (mut l, mut r) = (self.pos.min(0), self.pos.max(0));
        let mut lamp_sum = 0;
        for y in self.lo..=self.hi {
            let v = self.lamp(y);
            if v != 0 {
                l = l.min(y);
                r = r.max(y);
                lamp_sum += self.lamp_length(v);
            }
        }
        (2 * (r - l) - self.pos.abs()) as u64 + lamp_sum
    }

    #[cfg(test)]
    pub fn element(&self) -> GroupElement {
        let lamps = (self.lo..=self.hi).filter_map(|y| {
            let v = self.lamp(y);
            (v != 0).then(|| {
                let value = match self.kind {
                    LampKind::Integer => GroupElement::z(v),
                    LampKind::Finite(_) => GroupElement::Finite(v as usize),
                };
                (vec![y], value)
            })
        });
        let lamp_id = match self.kind {
            LampKind::Integer => GroupElement::z(0),
            LampKind::Finite(_) => GroupElement::Finite(0),
        };
        GroupElement::Wreath(WreathElement::new(vec![self.pos], lamps, &lamp_id))
    }
}

/// The origin-chain of the iterated wreath product `G_j = Z ≀ G_{j−1}`, `G_0 = Z`:
/// level `k` keeps only its base position, and the value at the base point of
/// level `k` is the state of level `k + 1`. Only switches made at position 0
/// reach the next level, so this is an exact marginal of the full walk.
pub(crate) struct OriginChain {
    pub pos: Vec<i64>,
    pub value: i64,
    /// Visits to 0 by the outermost base walk, counting time 0.
    pub outer_visits: u64,
}

impl OriginChain {
    pub fn new(depth: usize) -> Self {
        OriginChain {
            pos: vec![0; depth],
            value: 0,
            outer_visits: 1,
        }
    }

    fn step_level<R: RngCore>(&mut self, k: usize, bits: &mut Bits<R>) {
        if k == self.pos.len() {
            self.value += bits.lazy();
            return;
        }
        if self.pos[k] == 0 {
            self.step_level(k + 1, bits);
        }
        self.pos[k] += bits.lazy();
        if self.pos[k] == 0 {
            self.step_level(k + 1, bits);
        }
    }

    pub fn step<R: RngCore>(&mut self, bits: &mut Bits<R>) {
        self.step_level(0, bits);
        if self.pos[0] == 0 {
            self.outer_visits += 1;
        }
    }
}

/// Lazy walk on `Z²` with its visited set on a growable square window.
pub(crate) struct PlaneWalk {
    pub x: i64,
    pub y: i64,
    half: i64,
    visited: Vec<bool>,
    /// Unvisited points per sphere `|x| + |y| = r`.
    unvisited: Vec<u64>,
    /// Largest `r` with the ball `B(0, r)` fully visited.
    pub cover: u64,
}

impl PlaneWalk {
    pub fn new() -> Self {
        let mut w = PlaneWalk {
            x: 0,
            y: 0,
            half: 16,
            visited: vec![false; 33 * 33],
            unvisited: Vec::new(),
            cover: 0,
        };
        w.mark();
        w
    }

    fn sphere(r: usize) -> u64 {
        if r == 0 {
            1
        } else {
            4 * r as u64
        }
    }

    fn grow(&mut self) {
        let old = self.half;
        let new = 2 * old;
        let (os, ns) = (2 * old + 1, 2 * new + 1);
        let mut v = vec![false; (ns * ns) as usize];
        for i in 0..os {
            for j in 0..os {
                v[((i + new - old) * ns + (j + new - old)) as usize] = self.visited[(i * os + j) as usize];
            }
        }
        self.visited = v;
        self.half = new;
    }

    pub fn is_visited(&self, x: i64, y: i64) -> bool {
        if x.abs() > self.half || y.abs() > self.half {
            return false;
        }
        let s = 2 * self.half + 1;
        self.visited[((x + self.half) * s + (y + self.half)) as usize]
    }

    fn mark(&mut self) {
        while self.x.abs() > self.half || self.y.abs() > self.half {
            self.grow();
        }
        let s = 2 * self.half + 1;
        let i = ((self.x + self.half) * s + (self.y + self.half)) as usize;
        if self.visited[i] {
            return;
        }
        self.visited[i] = true;
        let r = (self.x.abs() + self.y.abs()) as usize;
        while self.unvisited.len() <= r {
            let k = self.unvisited.len();
            self.unvisited.push(Self::sphere(k));
        }
        self.unvisited[r] -= 1;
        while let Some(&0) = self.unvisited.get(self.cover as usize + 1) {
            self.cover += 1;
        }
    }

    pub fn step<R: RngCore>(&mut self, bits: &mut Bits<R>) {
        let (dx, dy) = bits.lazy_plane();
        self.x += dx;
        self.y += dy;
        if dx != 0 || dy != 0 {
            self.mark();
        }
    }

    /// Whether every point of the `l¹` ball of radius `r` around `(cx, cy)` is visited.
    pub fn ball_visited(&self, cx: i64, cy: i64, r: i64) -> bool {
        for dx in -r..=r {
            let span = r - dx.abs();
            for dy in -span..=span {
                if !self.is_visited(cx + dx, cy + dy) {
                    return false;
                }
            }
        }
        true
    }
}
