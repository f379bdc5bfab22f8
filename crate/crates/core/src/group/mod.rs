//! Group elements, multiplication, word metrics and the interval functionals on `Z ≀ F`.

mod ball;
mod descriptor;
mod element;
mod interval;
mod syntax;

pub use ball::{ball_enumerate, Ball, DEFAULT_BALL_CAP};
pub use descriptor::{Family, FiniteGroup, GroupDescriptor, WordLength};
pub use element::{FreeWord, GroupElement, WreathElement};
pub use interval::{interval_i, interval_j, IntervalZ};
pub use syntax::parse_element;

#[allow(unused_imports)]
pub(crate) use descriptor::{add, l1};

/// `(a, {site ↦ lamp})` in `Z ≀ Z/q`, lamp values given as residues.
pub fn lamplighter_element(a: i64, lamps: &[(i64, usize)]) -> GroupElement {
    GroupElement::Wreath(WreathElement::new(
        vec![a],
        lamps.iter().map(|&(p, v)| (vec![p], GroupElement::Finite(v))),
        &GroupElement::Finite(0),
    ))
}

/// `(a, {site ↦ lamp})` in `Z ≀ Z`.
pub fn zwrz_element(a: i64, lamps: &[(i64, i64)]) -> GroupElement {
    GroupElement::Wreath(WreathElement::new(
        vec![a],
        lamps.iter().map(|&(p, v)| (vec![p], GroupElement::z(v))),
        &GroupElement::z(0),
    ))
}

pub fn free_word(letters: &[i32]) -> GroupElement {
    GroupElement::Free(FreeWord::from_letters(letters.iter().copied()).expect("non-zero letters"))
}

#[cfg(test)]
mod tests;
