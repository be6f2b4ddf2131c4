//! Criterion benchmarks for `lame-core`; see `benches/core.rs`.
