//! Run orchestration: gate experiments, scans, benchmarks.
