use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use super::element::{FreeWord, GroupElement, WreathElement};
use crate::error::{domain, Error, Result};

/// A finite group given by its multiplication table. Index 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    dist: Vec<u64>,
}

impl FiniteGroup {
    /// `table[i * order + j]` is the product of `i` and `j`. When `generators` is
    /// `None` every non-identity element is a generator.
    pub fn from_table(order: usize, table: Vec<usize>, generators: Option<Vec<usize>>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(domain("multiplication table must be order x order"));
        }
        if table.iter().any(|&x| x >= order) {
            return Err(domain("table entry out of range"));
        }
        for i in 0..order {
            if table[i] != i || table[i * order] != i {
                return Err(domain("index 0 must be the identity"));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    let ab = table[a * order + b];
                    let bc = table[b * order + c];
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(domain("table is not associative"));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b;
                }
            }
            if inverse[a] == usize::MAX {
                return Err(domain("element without inverse"));
            }
        }
        let mut generators = generators.unwrap_or_else(|| (1..order).collect());
        generators.sort_unstable();
        generators.dedup();
        if generators.iter().any(|&g| g == 0 || g >= order) {
            return Err(domain("generators must be non-identity elements"));
        }
        if generators.iter().any(|&g| !generators.contains(&inverse[g])) {
            return Err(domain("generating set must be symmetric"));
        }
        let mut dist = vec![u64::MAX; order];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &generators {
                let y = table[x * order + s];
                if dist[y] == u64::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist.contains(&u64::MAX) {
            return Err(domain("generators do not generate the group"));
        }
        Ok(FiniteGroup {
            order,
            table,
            inverse,
            generators,
            dist,
        })
    }

    /// Cyclic group Z/q with every non-identity element as a generator.
    pub fn cyclic(q: usize) -> Self {
        assert!(q >= 1);
        let table = (0..q * q).map(|k| (k / q + k % q) % q).collect();
        Self::from_table(q, table, None).expect("cyclic table is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn length(&self, a: usize) -> u64 {
        self.dist[a]
    }
}

/// One of the supported groups together with its fixed symmetric generating set.
///
/// Generators: unit vectors for lattices, the chosen generators for finite groups,
/// the free basis for free groups, and for wreath products the base unit vectors
/// together with the lamp generators placed at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    Lattice { dim: usize },
    Finite(Arc<FiniteGroup>),
    Wreath { base_dim: usize, lamp: Box<GroupDescriptor> },
    Free { rank: usize },
}

/// Named family of a descriptor, used for dispatch and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Zd(usize),
    FiniteTable(usize),
    WreathZoverF(usize),
    WreathZ2overF(usize),
    IteratedWreathZ(usize),
    Free(usize),
    OtherWreath,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Zd(d) => write!(f, "Z^{d}"),
            Family::FiniteTable(q) => write!(f, "finite(order {q})"),
            Family::WreathZoverF(q) => write!(f, "Z wr Z/{q}"),
            Family::WreathZ2overF(q) => write!(f, "Z^2 wr Z/{q}"),
            Family::IteratedWreathZ(j) => write!(f, "iterated Z wr (depth {j})"),
            Family::Free(m) => write!(f, "F_{m}"),
            Family::OtherWreath => write!(f, "wreath"),
        }
    }
}

/// Result of [`GroupDescriptor::word_length`]. `exact` is false for surrogate upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordLength {
    pub value: u64,
    pub exact: bool,
}

impl GroupDescriptor {
    pub fn zd(dim: usize) -> Self {
        GroupDescriptor::Lattice { dim }
    }

    pub fn cyclic(q: usize) -> Self {
        GroupDescriptor::Finite(Arc::new(FiniteGroup::cyclic(q)))
    }

    pub fn finite(group: FiniteGroup) -> Self {
        GroupDescriptor::Finite(Arc::new(group))
    }

    /// `Z ≀ Z/q`.
    pub fn lamplighter(q: usize) -> Self {
        Self::wreath(1, Self::cyclic(q))
    }

    /// `Z² ≀ Z/q`.
    pub fn lamplighter_z2(q: usize) -> Self {
        Self::wreath(2, Self::cyclic(q))
    }

    /// `G_0 = Z`, `G_j = Z ≀ G_{j-1}`.
    pub fn iterated_wreath_z(depth: usize) -> Self {
        let mut g = Self::zd(1);
        for _ in 0..depth {
            g = Self::wreath(1, g);
        }
        g
    }

    pub fn free(rank: usize) -> Self {
        GroupDescriptor::Free { rank }
    }

    pub fn wreath(base_dim: usize, lamp: GroupDescriptor) -> Self {
        GroupDescriptor::Wreath {
            base_dim,
            lamp: Box::new(lamp),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            GroupDescriptor::Lattice { dim } => Family::Zd(*dim),
            GroupDescriptor::Finite(g) => Family::FiniteTable(g.order()),
            GroupDescriptor::Free { rank } => Family::Free(*rank),
            GroupDescriptor::Wreath { base_dim, lamp } => match (base_dim, lamp.as_ref()) {
                (1, GroupDescriptor::Finite(g)) => Family::WreathZoverF(g.order()),
                (2, GroupDescriptor::Finite(g)) => Family::WreathZ2overF(g.order()),
                (1, inner) => match inner.family() {
                    Family::Zd(1) => Family::IteratedWreathZ(1),
                    Family::IteratedWreathZ(j) => Family::IteratedWreathZ(j + 1),
                    _ => Family::OtherWreath,
                },
                _ => Family::OtherWreath,
            },
        }
    }

    /// Order of the lamp group for `Z ≀ F` and `Z² ≀ F`.
    pub fn lamp_order(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Wreath { lamp, .. } => match lamp.as_ref() {
                GroupDescriptor::Finite(g) => Some(g.order()),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::Lattice { dim } => GroupElement::Lattice(vec![0; *dim]),
            GroupDescriptor::Finite(_) => GroupElement::Finite(0),
            GroupDescriptor::Wreath { base_dim, .. } => GroupElement::Wreath(WreathElement::identity(*base_dim)),
            GroupDescriptor::Free { .. } => GroupElement::Free(FreeWord::identity()),
        }
    }

    /// The symmetric generating set (identity excluded).
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            GroupDescriptor::Lattice { dim } => unit_vectors(*dim).into_iter().map(GroupElement::Lattice).collect(),
            GroupDescriptor::Finite(g) => g.generators().iter().map(|&s| GroupElement::Finite(s)).collect(),
            GroupDescriptor::Free { rank } => (1..=*rank as i32)
                .flat_map(|i| [i, -i])
                .map(|l| GroupElement::Free(FreeWord::from_letters([l]).unwrap()))
                .collect(),
            GroupDescriptor::Wreath { base_dim, lamp } => {
                let mut out: Vec<GroupElement> = unit_vectors(*base_dim)
                    .into_iter()
                    .map(|b| GroupElement::Wreath(WreathElement::new(b, [], &lamp.identity())))
                    .collect();
                let id = lamp.identity();
                for s in lamp.generators() {
                    out.push(GroupElement::Wreath(WreathElement::new(
                        vec![0; *base_dim],
                        [(vec![0; *base_dim], s)],
                        &id,
                    )));
                }
                out
            }
        }
    }

    /// Checks that `x` is a well-formed element of this group.
    pub fn check(&self, x: &GroupElement) -> Result<()> {
        let bad = || Err(domain(format!("element {x} does not belong to {}", self.family())));
        match (self, x) {
            (GroupDescriptor::Lattice { dim }, GroupElement::Lattice(v)) if v.len() == *dim => Ok(()),
            (GroupDescriptor::Finite(g), GroupElement::Finite(k)) if *k < g.order() => Ok(()),
            (GroupDescriptor::Free { rank }, GroupElement::Free(w))
                if w.letters().iter().all(|l| l.unsigned_abs() as usize <= *rank) =>
            {
                Ok(())
            }
            (GroupDescriptor::Wreath { base_dim, lamp }, GroupElement::Wreath(w)) if w.base.len() == *base_dim => {
                let id = lamp.identity();
                for (site, v) in w.lamps() {
                    if site.len() != *base_dim || *v == id {
                        return bad();
                    }
                    lamp.check(v)?;
                }
                Ok(())
            }
            _ => bad(),
        }
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        match (self, x, y) {
            (GroupDescriptor::Lattice { dim }, GroupElement::Lattice(a), GroupElement::Lattice(b))
                if a.len() == *dim && b.len() == *dim =>
            {
                Ok(GroupElement::Lattice(add(a, b)))
            }
            (GroupDescriptor::Finite(g), GroupElement::Finite(a), GroupElement::Finite(b))
                if *a < g.order() && *b < g.order() =>
            {
                Ok(GroupElement::Finite(g.mul(*a, *b)))
            }
            (GroupDescriptor::Free { .. }, GroupElement::Free(a), GroupElement::Free(b)) => {
                Ok(GroupElement::Free(a.mul(b)))
            }
            (GroupDescriptor::Wreath { base_dim, lamp }, GroupElement::Wreath(a), GroupElement::Wreath(b))
                if a.base.len() == *base_dim && b.base.len() == *base_dim =>
            {
                let id = lamp.identity();
                let mut out = a.clone();
                out.base = add(&a.base, &b.base);
                for (site, v) in b.lamps() {
                    let target = add(site, &a.base);
                    let cur = a.lamp(&target).cloned().unwrap_or_else(|| id.clone());
                    let new = lamp.multiply(&cur, v)?;
                    out.set_lamp(target, new, &id);
                }
                Ok(GroupElement::Wreath(out))
            }
            _ => Err(Error::Domain(format!(
                "cannot multiply {x} and {y} in {}",
                self.family()
            ))),
        }
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        match (self, x) {
            (GroupDescriptor::Lattice { .. }, GroupElement::Lattice(a)) => {
                Ok(GroupElement::Lattice(a.iter().map(|v| -v).collect()))
            }
            (GroupDescriptor::Finite(g), GroupElement::Finite(a)) if *a < g.order() => {
                Ok(GroupElement::Finite(g.inv(*a)))
            }
            (GroupDescriptor::Free { .. }, GroupElement::Free(w)) => Ok(GroupElement::Free(w.inverse())),
            (GroupDescriptor::Wreath { lamp, .. }, GroupElement::Wreath(w)) => {
                // (a, f)^{-1} = (-a, k ↦ f(k + a)^{-1})
                let id = lamp.identity();
                let neg: Vec<i64> = w.base.iter().map(|v| -v).collect();
                let mut lamps = Vec::with_capacity(w.support_len());
                for (site, v) in w.lamps() {
                    lamps.push((add(site, &neg), lamp.inverse(v)?));
                }
                Ok(GroupElement::Wreath(WreathElement::new(neg, lamps, &id)))
            }
            _ => Err(Error::Domain(format!("{x} does not belong to {}", self.family()))),
        }
    }

    /// Word length in the fixed generating set.
    ///
    /// Exact for lattices, finite groups, free groups and wreath products over `Z`
    /// (travel `2(R-L) - |x|` plus the lamp lengths). Over `Z^d`, `d ≥ 2`, the
    /// travel term is a nearest-neighbour L¹ tour through the support, reported
    /// with `exact = false`.
    pub fn word_length(&self, x: &GroupElement) -> WordLength {
        match (self, x) {
            (GroupDescriptor::Lattice { .. }, GroupElement::Lattice(v)) => WordLength {
                value: l1(v),
                exact: true,
            },
            (GroupDescriptor::Finite(g), GroupElement::Finite(k)) => WordLength {
                value: g.length(*k),
                exact: true,
            },
            (GroupDescriptor::Free { .. }, GroupElement::Free(w)) => WordLength {
                value: w.len() as u64,
                exact: true,
            },
            (GroupDescriptor::Wreath { base_dim, lamp }, GroupElement::Wreath(w)) => {
                let mut value = 0u64;
                let mut exact = true;
                for v in w.lamps().values() {
                    let l = lamp.word_length(v);
                    value += l.value;
                    exact &= l.exact;
                }
                if *base_dim == 1 {
                    let x = w.base[0];
                    let mut lo = x.min(0);
                    let mut hi = x.max(0);
                    if let Some((first, _)) = w.lamps().first_key_value() {
                        lo = lo.min(first[0]);
                    }
                    if let Some((last, _)) = w.lamps().last_key_value() {
                        hi = hi.max(last[0]);
                    }
                    value += (2 * (hi - lo) - x.abs()) as u64;
                } else {
                    value += nearest_neighbour_tour(w.lamps().keys().cloned().collect(), &w.base);
                    exact &= w.support_len() == 0;
                }
                WordLength { value, exact }
            }
            _ => WordLength {
                value: u64::MAX,
                exact: false,
            },
        }
    }
}

fn unit_vectors(dim: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for s in [1, -1] {
            let mut v = vec![0; dim];
            v[i] = s;
            out.push(v);
        }
    }
    out
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn l1(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).sum()
}

fn l1_dist(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x - y).unsigned_abs()).sum()
}

/// Greedy tour from the origin through every point, ending at `end`.
fn nearest_neighbour_tour(mut points: Vec<Vec<i64>>, end: &[i64]) -> u64 {
    let mut cur = vec![0; end.len()];
    let mut total = 0;
    while !points.is_empty() {
        let (idx, d) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, l1_dist(&cur, p)))
            .min_by_key(|&(i, d)| (d, i))
            .unwrap();
        total += d;
        cur = points.swap_remove(idx);
    }
    total + l1_dist(&cur, end)
}
