//! SC, SCL and PAC-SCL decoding of the binary component codes, composed
//! into the multilevel lattice decoder.

mod engine;
mod multilevel;

pub use engine::{
    boxplus, genie_sc_errors, list_decode, pac_scl_decode, sc_decode, scl_decode, CodeSpec,
    Precoder,
};
pub use multilevel::{last_stage_round, multilevel_decode, DecodeResult};

use crate::error::Error;
use crate::profile::ConvolutionProfile;

/// Which component-code decoder the multilevel decoder runs at each level.
///
/// Tie rules are fixed and deterministic: an LLR of exactly 0 decides bit 0,
/// path-metric ties break lexicographically on path history, and rounding
/// ties in the last stage go to the even integer.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoderConfig {
    Sc,
    Scl { list_size: usize },
    PacScl { list_size: usize, conv: ConvolutionProfile },
}

impl DecoderConfig {
    pub fn scl(list_size: usize) -> Result<Self, Error> {
        if list_size == 0 {
            return Err(Error::DecoderMismatch);
        }
        Ok(Self::Scl { list_size })
    }

    pub fn pac_scl(list_size: usize, conv: ConvolutionProfile) -> Result<Self, Error> {
        if list_size == 0 {
            return Err(Error::DecoderMismatch);
        }
        Ok(Self::PacScl { list_size, conv })
    }

    pub fn list_size(&self) -> usize {
        match self {
            Self::Sc => 1,
            Self::Scl { list_size } | Self::PacScl { list_size, .. } => *list_size,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sc => "sc",
            Self::Scl { .. } => "scl",
            Self::PacScl { .. } => "pac-scl",
        }
    }
}
