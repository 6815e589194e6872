//! Command line driver: example files, the resolution cache, and reports.

pub mod cache;
pub mod commands;
pub mod report;
pub mod spec;

pub use commands::{run, run_batch, Command, Flags, Format, Outcome, Status};
pub use spec::{parse_spec, parse_spec_str, ExampleSpec, Settings, SpecError};
