//! Command-line frontend for `seqdensity`: argument and config handling,
//! dispatch to the library, and JSON/CSV output.

pub mod config;
pub mod run;

pub use config::{Command, Format, RunConfig};
pub use run::{document, emit, load_config, run, CliError, Outcome};
