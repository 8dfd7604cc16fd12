//! Report shapes and the benchmark harness behind the `market` binary.

pub mod bench;
pub mod report;
