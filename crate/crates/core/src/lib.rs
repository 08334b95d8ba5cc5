//! Lattice codes from polar-like binary codes.
//!
//! Builds Construction-D lattices from nested rate profiles over the polar
//! transform, optionally precoded by an upper unitriangular convolution
//! (PAC lattices). Provides exact encoding and membership tests, multilevel
//! SC/SCL decoding over the mod-2 AWGN channel, reliability-based profile
//! selection, exact distance/kissing-number analysis, and a seeded Monte
//! Carlo error-rate harness.
//!
//! Row and index conventions are 1-based in the public profile API and
//! follow the natural (non-bit-reversed) Kronecker order of the polar
//! transform throughout. All generator arithmetic is exact integer or
//! dyadic-rational arithmetic; floating point enters only through channel
//! likelihoods, capacities and noise sampling.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod channel;
pub mod coord;
pub mod decode;
pub mod error;
pub mod lattice;
mod math;
pub mod profile;
pub mod reliability;
pub mod rng;
pub mod sim;
pub mod transform;

pub use error::Error;
pub use lattice::{LatticeKind, LatticeSpec};
pub use profile::{ConvolutionProfile, RateProfile};
