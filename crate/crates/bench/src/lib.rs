//! Benchmark-only crate; the interesting code is in `benches/pipeline.rs`.
