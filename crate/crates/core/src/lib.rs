//! Finite inverse semigroups and their normal extensions.
//!
//! The crate builds λ-semidirect products, full restricted semidirect
//! products and Houghton-style wreath products of finite inverse semigroups,
//! enumerates congruences and translational hulls, and searches for (split)
//! almost Billhardt transversals. Everything works on dense element indices
//! and exhaustive scans, so each construction can be checked mechanically
//! against its defining laws.

pub mod action;
pub mod billhardt;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod morphism;
pub mod pbij;
pub mod products;
pub mod semigroup;
pub mod trhull;
pub mod verify;

pub use error::{Error, Result};
pub use semigroup::{validate, ElementSet, FiniteSemigroup, InverseSemigroup};
