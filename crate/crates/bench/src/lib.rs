// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmarks live in `benches/`.
