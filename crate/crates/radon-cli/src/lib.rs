//! Library side of the command-line front end: synthetic corpus generation
//! and the benchmark runners, shared with the integration tests.

pub mod bench;
pub mod synth;
