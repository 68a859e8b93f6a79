//! Criterion benchmarks for pillai-core live in `benches/`.
