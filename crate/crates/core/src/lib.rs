#![no_std]
extern crate alloc;

pub mod analysis;
pub mod bp;
pub mod codes;
pub mod cs_bp;
pub mod error;
pub mod gf2;
pub mod greedy;
pub mod sensing;

pub use error::{Error, Result};
