//! Criterion benchmarks for `cutset-core`; see `benches/lattice.rs`.
