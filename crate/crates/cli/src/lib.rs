//! Command-line interface for the error-density estimation library:
//! argument types, CSV ingestion/emission and the command runners.

pub mod args;
pub mod csv_io;
pub mod error;
pub mod runner;

pub use args::{Cli, Command, OutputFormat};
pub use csv_io::{curves_from_csv, curves_to_csv, load_csv, parse_csv, table_to_csv};
pub use error::{CliError, Result};
pub use runner::{deliver, execute, run_diagnose, run_estimate, run_rates, run_simulate};
