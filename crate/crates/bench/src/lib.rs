//! Benchmark-only package; see `benches/fits.rs`.
