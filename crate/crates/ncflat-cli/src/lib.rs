//! Batch front end for the ncflat verification engine: parse instance
//! documents, run the suites, and render deterministic reports.
//!
//! The binary lives in `main.rs`; everything it does goes through these
//! modules so integration tests can drive the same code paths directly.

pub mod digest;
pub mod instance;
pub mod reportjson;
pub mod suites;
