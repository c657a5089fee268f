// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON documents for measure specs and convolution results.
//!
//! A spec document looks like
//!
//! ```json
//! {"name": "free-poisson", "flavor": "free", "values": ["1", "1", "1"], "L": "4",
//!  "mean": "1", "variance": "1"}
//! ```
//!
//! `flavor` is `free`, `boolean` or `moments`; only `flavor` and `values` are
//! required. Rationals are strings `"p/q"`; JSON integers are accepted on
//! input.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize};

use crate::convolution::MeasureSpec;
use crate::cumulants::{CumulantSequence, MomentSequence};
use crate::rational::{int, parse_rational, serde_string};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Free,
    Boolean,
    Moments,
}

/// Wire form of a [`MeasureSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub flavor: SequenceKind,
    #[serde(serialize_with = "serde_string::vec::serialize", deserialize_with = "lenient_vec")]
    pub values: Vec<BigRational>,
    #[serde(
        rename = "L",
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "serde_string::option::serialize",
        deserialize_with = "lenient_option"
    )]
    pub support_bound: Option<BigRational>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "serde_string::option::serialize",
        deserialize_with = "lenient_option"
    )]
    pub mean: Option<BigRational>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "serde_string::option::serialize",
        deserialize_with = "lenient_option"
    )]
    pub variance: Option<BigRational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Token {
    Text(String),
    Int(i64),
}

impl Token {
    fn value(self) -> Result<BigRational> {
        match self {
            Token::Text(t) => parse_rational(&t),
            Token::Int(i) => Ok(int(i)),
        }
    }
}

fn lenient_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
    Vec::<Token>::deserialize(d)?.into_iter().map(|t| t.value().map_err(serde::de::Error::custom)).collect()
}

fn lenient_option<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
    Option::<Token>::deserialize(d)?.map(|t| t.value().map_err(serde::de::Error::custom)).transpose()
}

impl SpecDocument {
    /// Free cumulants of `spec`, with its declarations.
    pub fn from_spec(spec: &MeasureSpec) -> Self {
        SpecDocument {
            name: spec.name().map(str::to_owned),
            flavor: SequenceKind::Free,
            values: spec.free_cumulants().values().to_vec(),
            support_bound: spec.support_bound().cloned(),
            mean: spec.declared_mean().cloned(),
            variance: spec.declared_variance().cloned(),
        }
    }

    pub fn into_spec(self) -> Result<MeasureSpec> {
        let spec = match self.flavor {
            SequenceKind::Free => MeasureSpec::from_cumulants(CumulantSequence::free(self.values)?),
            SequenceKind::Boolean => MeasureSpec::from_cumulants(CumulantSequence::boolean(self.values)?),
            SequenceKind::Moments => MeasureSpec::from_moments(MomentSequence::new(self.values)?),
        };
        let spec = match self.name {
            Some(n) => spec.with_name(n),
            None => spec,
        };
        let spec = match self.support_bound {
            Some(l) => spec.with_support_bound(l)?,
            None => spec,
        };
        spec.with_declared(self.mean, self.variance)
    }
}

pub fn parse_spec(text: &str) -> Result<MeasureSpec> {
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure spec: {e}")))?;
    doc.into_spec()
}

/// Compact single-line JSON for `spec`.
pub fn emit_spec(spec: &MeasureSpec) -> String {
    serde_json::to_string(&SpecDocument::from_spec(spec)).expect("spec documents always serialize")
}

/// Result of a convolution: both sequences kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub op: String,
    pub strategy: String,
    pub order: usize,
    pub factors: usize,
    #[serde(with = "serde_string::vec")]
    pub free_cumulants: Vec<BigRational>,
    #[serde(with = "serde_string::vec")]
    pub moments: Vec<BigRational>,
    #[serde(with = "serde_string::vec")]
    pub boolean_cumulants: Vec<BigRational>,
}

impl ConvolutionReport {
    pub fn new(op: &str, strategy: &str, factors: usize, spec: &MeasureSpec) -> Self {
        ConvolutionReport {
            op: op.to_owned(),
            strategy: strategy.to_owned(),
            order: spec.order(),
            factors,
            free_cumulants: spec.free_cumulants().values().to_vec(),
            moments: spec.moments().values().to_vec(),
            boolean_cumulants: spec.boolean_cumulants().values().to_vec(),
        }
    }
}
