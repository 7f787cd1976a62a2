//! Benchmarks only; run `cargo bench -p microlocal-bench`.
