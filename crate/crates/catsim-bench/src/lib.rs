//! Criterion benchmarks for the catsim kernels; run with `cargo bench -p catsim-bench`.
