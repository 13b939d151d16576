//! Criterion benchmarks for the maniplab solvers; see `benches/`.
