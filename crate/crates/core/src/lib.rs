pub mod arith;
pub mod asymptotics;
pub mod cring;
pub mod eisenbud;
pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod resolve;

pub use error::{Error, Result};

/// Version of this library, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
