use std::collections::BTreeMap;
use std::fmt;

/// An element of one of the supported groups.
///
/// Nested wreath products (`Z ≀ (Z ≀ Z)` and deeper) are `Wreath` values whose
/// lamp values are themselves `Wreath` values; no separate variant is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Lattice(Vec<i64>),
    Finite(usize),
    Wreath(WreathElement),
    Free(FreeWord),
}

/// Base point plus a finitely supported lamp map. Identity lamp values are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub base: Vec<i64>,
    lamps: BTreeMap<Vec<i64>, GroupElement>,
}

impl WreathElement {
    pub fn identity(dim: usize) -> Self {
        WreathElement {
            base: vec![0; dim],
            lamps: BTreeMap::new(),
        }
    }

    /// Lamp values equal to `lamp_identity` are dropped.
    pub fn new(
        base: Vec<i64>,
        lamps: impl IntoIterator<Item = (Vec<i64>, GroupElement)>,
        lamp_identity: &GroupElement,
    ) -> Self {
        let lamps = lamps
            .into_iter()
            .filter(|(_, v)| v != lamp_identity)
            .collect();
        WreathElement { base, lamps }
    }

    pub fn lamps(&self) -> &BTreeMap<Vec<i64>, GroupElement> {
        &self.lamps
    }

    pub fn lamp(&self, site: &[i64]) -> Option<&GroupElement> {
        self.lamps.get(site)
    }

    pub fn support_len(&self) -> usize {
        self.lamps.len()
    }

    pub(crate) fn set_lamp(&mut self, site: Vec<i64>, value: GroupElement, lamp_identity: &GroupElement) {
        if &value == lamp_identity {
            self.lamps.remove(&site);
        } else {
            self.lamps.insert(site, value);
        }
    }
}

/// Freely reduced word. Letter `+i` is the `i`-th basis element (1-based), `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    /// Reduces the letters; zero letters are rejected by returning `None`.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Option<Self> {
        let mut w = Vec::new();
        for l in letters {
            if l == 0 {
                return None;
            }
            push_reduced(&mut w, l);
        }
        Some(FreeWord(w))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut w, l);
        }
        FreeWord(w)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }
}

pub(crate) fn push_reduced(w: &mut Vec<i32>, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

impl GroupElement {
    pub fn as_wreath(&self) -> Option<&WreathElement> {
        match self {
            GroupElement::Wreath(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_free(&self) -> Option<&FreeWord> {
        match self {
            GroupElement::Free(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_lattice(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Lattice(v) => Some(v),
            _ => None,
        }
    }

    pub fn z(x: i64) -> Self {
        GroupElement::Lattice(vec![x])
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Element syntax:
/// lattice `(x,y)`, finite `#k`, wreath `(a)[p:v,...]` with sites in
/// increasing order, free words as signed letters `+1-2+1` (`e` when empty).
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Lattice(v) => write_tuple(f, v),
            GroupElement::Finite(k) => write!(f, "#{k}"),
            GroupElement::Free(w) => write!(f, "{w}"),
            GroupElement::Wreath(w) => {
                write_tuple(f, &w.base)?;
                write!(f, "[")?;
                for (i, (site, v)) in w.lamps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if site.len() == 1 {
                        write!(f, "{}", site[0])?;
                    } else {
                        write_tuple(f, site)?;
                    }
                    write!(f, ":{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for l in &self.0 {
            write!(f, "{l:+}")?;
        }
        Ok(())
    }
}
