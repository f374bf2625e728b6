//! Criterion benchmarks for distmul; see `benches/`.
