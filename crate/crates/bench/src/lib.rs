//! Criterion benchmarks for liecert live in `benches/`.
