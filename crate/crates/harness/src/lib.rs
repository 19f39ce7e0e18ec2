//! Experiment plumbing around the `ldpc-cs` core: alist files, signal and
//! measurement generation, the Monte-Carlo runner and result emission.

pub mod alist;
pub mod error;
pub mod experiment;
pub mod report;
pub mod signal;

pub use error::{HarnessError, Result};
