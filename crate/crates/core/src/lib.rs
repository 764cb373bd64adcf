//! Exact construction and analysis of Horn, normalized Horn and lattice basis
//! hypergeometric D-modules.
//!
//! All arithmetic is over the rationals. The main entry points are
//! [`systems::HornData::validate`], the constructors in [`systems`], the
//! restriction pipeline in [`restriction`] and the analyses in [`analysis`].

pub mod analysis;
pub mod cli;
pub mod error;
pub mod exactlin;
pub mod groebner;
pub mod restriction;
pub mod systems;
pub mod weyl;

pub use error::{Error, Result};
