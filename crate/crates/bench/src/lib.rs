//! Criterion benchmarks for the planarize pipeline; see `benches/`.
