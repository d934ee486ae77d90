//! Criterion benchmarks for field construction, the gamma engine, the
//! spectrum, the decomposition pipelines and table scans. See `benches/`.
