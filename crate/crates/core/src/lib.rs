// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact combinatorics of non-crossing partitions and the free cumulants of
//! products of free random variables.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`]: the [`NoncrossingPartition`] type, the lattice order and
//!   join, Kreweras complements, the `k`-class predicates and the insertion
//!   operations used to factor `k`-preserving partitions.
//! * [`enumeration`]: generators for `NC(n)` and its `k`-equal, `k`-divisible
//!   and "pairs and singletons" subfamilies, plus the closed-form counters.
//! * [`cumulants`]: moment/cumulant transforms (free and Boolean), the Möbius
//!   function of `NC(n)` and the products-as-arguments formula.
//! * [`convolution`]: free multiplicative and additive convolution of
//!   truncated moment sequences, both through the pairwise Kreweras sum and the
//!   direct `k`-fold sum over `k`-equal / `k`-divisible partitions.
//! * [`bounds`]: certified bounds on free cumulants and on the right edge of
//!   the support of a multiplicative convolution.
//! * [`measures`]: closed forms for special laws and the large-`k` limit
//!   studies built on them.
//!
//! All arithmetic is exact (`BigUint` / `BigRational`); decimal output only
//! appears in explicitly requested reports.

pub mod bounds;
pub mod convolution;
pub mod cumulants;
pub mod enumeration;
mod error;
pub mod io;
pub mod measures;
pub mod partition;
pub mod rational;
pub mod selftest;

pub use bounds::{BoundCertificate, BoundConstant};
pub use convolution::{Convolver, MeasureSpec, Strategy};
pub use cumulants::{CumulantSequence, Flavor, FreeFamily, MomentSequence};
pub use enumeration::{CountTable, Family};
pub use error::{Error, Result};
pub use measures::NamedLaw;
pub use partition::{Factorization, InsertStep, NoncrossingPartition, SetPartition, TypeVector};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
