//! Exact combinatorics of quadratic polynomial matings.
//!
//! Everything here is integer arithmetic on rational angles (fractions of a
//! full turn). The circle carries the doubling map `t -> 2t mod 1`; rational
//! angles are periodic or preperiodic under it, and their landing patterns in
//! the Julia and Mandelbrot sets are decided by finite combinatorics:
//!
//! - [`angle`]: angles, doubling orbits, binary expansions, circular arcs;
//! - [`params`]: conjugate parameter angles, roots, wakes and limbs;
//! - [`landing`]: which dynamic rays land together for a given parameter;
//! - [`graph`]: ray-equivalence classes of a formal mating and their pullback;
//! - [`miner`]: the exhaustive census of maximal periodic ray connections.
//!
//! No floating point is used anywhere; overflow is a hard error.

pub mod angle;
pub mod graph;
pub mod landing;
pub mod miner;
pub mod params;

mod error;

pub use angle::{Angle, BinaryExpansion, CircularArc, PreperiodPeriod};
pub use error::Error;
pub use graph::{AngleUniverse, ConnectionPath, MatingSpec, RayClass};
pub use landing::{Landing, ParameterSpec, Verdict};
pub use miner::{ConnectionChain, NamedExample, SearchResult};
pub use params::{Limb, RootPair};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
