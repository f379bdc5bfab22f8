//! Exact `n`-step laws on `Z ≀ F` at class level, and the analyses built on them.

mod classed;
mod invariance;
mod profiles;
mod tv;

pub use classed::{class_cardinality, entropy_curve, exact_distribution, minimal_length, ClassedDistribution};
pub use invariance::{check_exact_invariance, InvarianceGate, InvarianceReport, Violation};
pub use profiles::{almost_constancy_profile, radius_profile, ConstancyProfile, RadiusOptions, RadiusProfile};
pub use tv::{exact_tv_shift, MAX_INCREMENT_SITES};
