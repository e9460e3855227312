//! Criterion benchmarks for the solver step, energy quadrature and commutator battery live in `benches/`.
