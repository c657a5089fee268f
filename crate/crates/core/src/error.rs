// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Blocks overlap, leave gaps, or are empty.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    /// The partition is a valid set partition but has a crossing.
    #[error("partition is crossing: {0}")]
    Crossing(String),
    #[error("ground sets differ: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("truncation order too small: need {needed}, have {available}")]
    Truncation { needed: usize, available: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for each variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPartition(_) => "invalid-partition",
            Error::Crossing(_) => "crossing",
            Error::GroundMismatch { .. } => "ground-mismatch",
            Error::Domain(_) => "domain",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Truncation { .. } => "truncation",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
        }
    }
}
