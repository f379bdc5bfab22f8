use serde::{Deserialize, Serialize};

use super::element::GroupElement;
use crate::error::{domain, Result};

/// A finite integer interval `[lo, hi]`, or empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntervalZ {
    Empty,
    Range { lo: i64, hi: i64 },
}

impl IntervalZ {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalZ::Range { lo, hi }
    }

    pub fn point(x: i64) -> Self {
        IntervalZ::Range { lo: x, hi: x }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntervalZ::Empty)
    }

    pub fn bounds(&self) -> Option<(i64, i64)> {
        match *self {
            IntervalZ::Empty => None,
            IntervalZ::Range { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn len(&self) -> u64 {
        match *self {
            IntervalZ::Empty => 0,
            IntervalZ::Range { lo, hi } => (hi - lo + 1) as u64,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        matches!(*self, IntervalZ::Range { lo, hi } if lo <= x && x <= hi)
    }

    pub fn contains_interval(&self, other: &IntervalZ) -> bool {
        match other.bounds() {
            None => true,
            Some((a, b)) => self.contains(a) && self.contains(b),
        }
    }

    pub fn hull_point(self, x: i64) -> Self {
        match self {
            IntervalZ::Empty => IntervalZ::point(x),
            IntervalZ::Range { lo, hi } => IntervalZ::Range {
                lo: lo.min(x),
                hi: hi.max(x),
            },
        }
    }

    pub fn hull(self, other: IntervalZ) -> Self {
        match other.bounds() {
            None => self,
            Some((a, b)) => self.hull_point(a).hull_point(b),
        }
    }

    pub fn shift(self, by: i64) -> Self {
        match self {
            IntervalZ::Empty => IntervalZ::Empty,
            IntervalZ::Range { lo, hi } => IntervalZ::Range {
                lo: lo + by,
                hi: hi + by,
            },
        }
    }
}

impl std::fmt::Display for IntervalZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntervalZ::Empty => write!(f, "empty"),
            IntervalZ::Range { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

fn z_wreath(x: &GroupElement) -> Result<&super::WreathElement> {
    match x {
        GroupElement::Wreath(w) if w.base.len() == 1 => Ok(w),
        _ => Err(domain(format!("{x} is not a wreath element over Z"))),
    }
}

/// Minimal interval containing the lamp support.
pub fn interval_i(x: &GroupElement) -> Result<IntervalZ> {
    let w = z_wreath(x)?;
    Ok(match (w.lamps().first_key_value(), w.lamps().last_key_value()) {
        (Some((a, _)), Some((b, _))) => IntervalZ::new(a[0], b[0]),
        _ => IntervalZ::Empty,
    })
}

/// Minimal interval containing the lamp support, the origin and the base point.
pub fn interval_j(x: &GroupElement) -> Result<IntervalZ> {
    let w = z_wreath(x)?;
    Ok(interval_i(x)?.hull_point(0).hull_point(w.base[0]))
}
