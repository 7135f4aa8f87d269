//! Command-line front end: CSV ingestion, command dispatch and JSON reports.

pub mod commands;
pub mod ingest;
pub mod report;

pub use commands::{execute, Cli, Command, Execution};
pub use ingest::{ingest, ingest_reader, write_csv, IngestError, TrajectoryFile};
pub use report::{to_json, Report, ReportStatus, SCHEMA_VERSION};
