//! Finite flows, lifting properties and weak factorization systems on finite sets.
//!
//! Everything here is decided by exhaustive search over finite data: diagonal fillers,
//! hom-sets between finite flows, retracts in the arrow category, and extensional class
//! checks over a bounded universe of set maps.

pub mod error;
pub mod finset;
pub mod flow;
pub mod cli;
pub mod colimits;
pub mod dihomotopy;
pub mod lifting;
pub mod wfs;
mod uf;

pub use error::{Error, Result};
