//! Criterion benchmarks for the exhaustive sweeps; see `benches/`.
