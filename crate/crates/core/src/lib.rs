//! Smooth complete toric varieties as fans: intersection numbers, Mori cones,
//! projectivity, blow-ups along invariant curves and their analysis.

pub mod analyzer;
pub mod birational;
pub mod cli;
pub mod error;
pub mod ewald;
pub mod fan;
pub mod gallery;
pub mod intersection;
pub mod lattice;
pub mod lp;
pub mod mori;

pub use error::{Error, Result};
pub use fan::{Fan, Wall};
pub use lattice::{LatticePoint, Rational};
