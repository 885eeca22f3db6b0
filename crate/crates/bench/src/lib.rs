//! Criterion benchmarks for `ifsx-core`; see `benches/core.rs`.
