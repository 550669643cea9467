//! Benchmarks for the photostat crate live under `benches/`.
