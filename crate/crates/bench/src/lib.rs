// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for `qdsim-core` live under `benches/`.
