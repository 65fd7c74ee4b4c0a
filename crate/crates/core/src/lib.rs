//! Word-metric sphere enumeration and statistical hyperbolicity measurements
//! for a handful of finitely generated group families.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] defines the group families, canonical element forms, the group
//!   law, closed-form word lengths and a breadth-first distance oracle.
//! * [`sphere`] enumerates word-metric spheres, reports growth, samples
//!   uniformly from spheres and caches datasets on disk.
//! * [`estat`] computes the sphere-averaged normalized distance `E_n`, exactly
//!   or by Monte Carlo, and summarizes convergence across radii.
//! * [`relhyp`] exposes the free-product diagnostics: syllable paths,
//!   deep/transition classification, the `C_{R+i}` sphere decomposition and
//!   peripheral Poincaré partial sums.

pub mod error;
pub mod estat;
pub mod group;
pub mod relhyp;
pub mod sphere;

pub use error::{Error, Result};
pub use group::{Element, Generator, GroupSpec, Side};
