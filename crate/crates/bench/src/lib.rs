//! Criterion benchmarks for the census oracle and the closed forms; see `benches/`.
