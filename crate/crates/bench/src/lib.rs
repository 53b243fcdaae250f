//! Criterion benchmarks for the charshift kernels live in `benches/`.
