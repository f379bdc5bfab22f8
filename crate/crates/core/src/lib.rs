//! Random walks on groups: exact transition probabilities on lamplighter and free
//! groups, almost-invariance and almost-constancy profiles, and Monte Carlo
//! estimators for groups without exact structure.

pub mod error;
pub mod group;
pub mod weight;

pub use error::{Error, Result};
pub use weight::{Weight, WeightMode};
pub mod rng;
pub mod walk;
pub mod stats;
pub mod lamplighter;
pub mod free;
pub mod estimators;
