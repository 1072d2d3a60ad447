//! Joint one-bit precoding and antenna selection for the downlink of a
//! multi-user MISO system whose base station has one-bit DACs.
//!
//! The transmit vector is optimized directly: each real component of each
//! antenna is `-1`, `+1` or switched off. [`precoders::iht`] finds a vector
//! whose noiseless observations land in the intended PSK decision regions,
//! [`precoders::bf`] then pushes them away from the region edges.
//! [`sim`] estimates symbol error rates by seeded Monte-Carlo simulation.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod lift;
pub mod precoders;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
pub use geometry::{Constellation, DecisionBasis, FeasibilityMatrix, MessageVector};
pub use lift::{ComplexMatrix, RealMatrix};
pub use precoders::{SolverKind, TernaryVector};
pub use sim::{SerCurve, SimConfig};
