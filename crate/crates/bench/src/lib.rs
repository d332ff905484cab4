//! Benchmark-only crate; see `benches/encodings.rs`.
