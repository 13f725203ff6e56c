//! Criterion benchmarks for the certifier; see `benches/`.
