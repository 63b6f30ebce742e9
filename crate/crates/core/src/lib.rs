//! Exact finite-set arithmetic for sum-product experiments: pair sets,
//! representation functions and energies, popular/rich subset constructions,
//! point–line incidences, and a registry of checkable inequalities.

pub mod constructions;
pub mod error;
pub mod family;
pub mod incidence;
pub mod rational;
pub mod rep;
mod scaled;
pub mod sets;
pub mod verifier;

pub use error::{Error, Result};
pub use family::{gen_family, FamilyKind, FamilySpec, RangeSpec};
pub use rational::Rational;
pub use rep::{energy, energy_of, pair_set, pair_set_size, projection_count, rep_fn, EnergyValue, Op, RepFn};
pub use sets::{intersect_dilate, is_convex, make_set, transform, FiniteSet};
