pub mod error;
pub mod exact;
pub mod harness;
pub mod lattice;
pub mod lab;
pub mod metrics;
pub mod rng;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
