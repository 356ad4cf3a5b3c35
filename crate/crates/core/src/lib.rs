//! Executable laboratory for cardinal arithmetic in permutation models.
//!
//! Four homogeneous atom universes are modelled locally through partial
//! automorphisms and an extension test ([`atoms`]). Finitely supported subsets
//! of the atoms are enumerated through 1-types over a finite support
//! ([`symsets`]). Hereditarily finite objects and the explicit injections
//! between derived domains live in [`constructions`]; the impossibility
//! arguments run as oracle-driven engines in [`refute`]; and [`cardtable`]
//! closes cardinal-relation facts under a fixed rule set.

pub mod atoms;
pub mod cardtable;
pub mod constructions;
pub mod error;
pub mod refute;
pub mod symsets;

pub use error::{Error, Result};
