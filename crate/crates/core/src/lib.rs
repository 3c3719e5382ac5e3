//! Finite groups and their unitary irreps, exact simulation of coset-state
//! Fourier sampling on k registers, and the entanglement lower-bound formulas
//! evaluated exactly for several group families.

pub mod bounds;
pub mod error;
pub mod format;
pub mod group;
pub mod linalg;
pub mod repr;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Element, FiniteGroup, GroupKind, Subgroup};
