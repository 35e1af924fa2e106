//! Benchmark harness for rtf-core; see `benches/`.
