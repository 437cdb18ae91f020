//! Criterion benchmarks for the symdyn kernels; see `benches/`.
