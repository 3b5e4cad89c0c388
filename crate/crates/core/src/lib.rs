//! Exact classical and equivariant Ehrhart theory for rational polytopes under
//! finite group actions.

pub mod algebra;
pub mod ehrhart;
pub mod equivariant;
pub mod error;
pub mod families;
pub mod group;
pub mod lattice;

pub use error::{Error, Result};
